// Closed-form BER expressions for the equal-power (SA) and power-allocated
// (PSA) systems, plus the fractional objective the joint optimizer drives.
#pragma once

#include "core/model.hpp"

namespace muofdm::analytic {

// Inverse squared SNR of the equal-power system as a function of the
// reference count n:
//   ((n+1)/n) * p*m*n0 / ((m-n)*eb)
//   + beta*m^2*n0^2 / (2*n*(m-n)^2*eb^2)
//   + 2*(p-1)*m / ((m-n)*eb)
// Lower is better; ber_sa is a monotone transform of this value.
// Throws std::invalid_argument for invalid params or n outside [1, m-1].
double objective_sa(const SystemParams& params, int n);

// Equal-power BER: 0.5 * erfc(objective_sa^(-1/2)).
double ber_sa(const SystemParams& params, int n);

// Numerator and denominator of the power-allocated system's SNR-like ratio U:
//   numerator   = 2*n*a*b*(m-n)^2*eb^2
//   denominator = (m-n)*eb*sum_c*(2*(a*p+b)*(n+1)*n0 + 4*a*b*(p-1)*n)
//                 + beta*n0^2*sum_c^2,  with sum_c = (m-n)*a + n*b
struct RatioParts {
    double numerator = 0.0;
    double denominator = 0.0;
};

RatioParts ratio_parts(const SystemParams& params, const Allocation& alloc);

// U = numerator / denominator.
double ratio_u(const SystemParams& params, const Allocation& alloc);

// Power-allocated BER: 0.5 * erfc(sqrt(U)).
double ber_psa(const SystemParams& params, const Allocation& alloc);

// Dinkelbach's subtractive form V(q) = numerator - q * denominator.
double dinkelbach_v(const SystemParams& params, const Allocation& alloc, double q);

}  // namespace muofdm::analytic
