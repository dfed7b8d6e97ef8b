// Closed-form optimizer for the reference-sub-carrier count of the
// equal-power system.  The stationary points of objective_sa over a
// continuous n solve a cubic; the integer optimum is picked from the
// rounded real roots plus the range endpoints.
#pragma once

#include <vector>

#include "core/model.hpp"

namespace muofdm::cardano {

// Coefficients of a3*n^3 + a2*n^2 + a1*n + a0 = 0, the stationarity
// condition of objective_sa in n:
//   a3 = -2*eb*(p*n0 + 2p - 2)
//   a2 =  2*eb*(p*m*n0 + 2pm - 2m - 2p*n0)
//   a1 =  3*m*n0*(2p*eb + beta*n0)
//   a0 = -m^2*n0*(2p*eb + beta*n0)
// a3 < 0 for every valid parameter set, and a1/(-a0) == 3/m identically.
struct CubicCoeffs {
    double a3 = 0.0;
    double a2 = 0.0;
    double a1 = 0.0;
    double a0 = 0.0;
};

CubicCoeffs cubic_coeffs(const SystemParams& params);

// Depressed form x^3 + zeta*x + xi = 0 obtained from the substitution
// n = x + shift with shift = -a2 / (3*a3); delta = zeta^3/27 + xi^2/4
// decides the root pattern (delta > 0: one real root; delta <= 0: three,
// counted with multiplicity).
struct DepressedCubic {
    double zeta = 0.0;
    double xi = 0.0;
    double delta = 0.0;
    double shift = 0.0;
};

DepressedCubic depress(const CubicCoeffs& coeffs);

// All real roots, back-shifted to the n domain (n = x + shift).  Each root
// is polished with a couple of Newton steps on the depressed cubic.
std::vector<double> real_roots(const DepressedCubic& dc);

// Integer minimizer of objective_sa over n in [1, m-1], picked among
// floor/ceil of every real root inside (0, m) plus the endpoints 1 and m-1.
// Ties resolve to the smaller n.
int optimal_n_closed_form(const SystemParams& params);

// Exhaustive scan of objective_sa over [1, m-1]; ties resolve to smaller n.
int optimal_n_bruteforce(const SystemParams& params);

}  // namespace muofdm::cardano
