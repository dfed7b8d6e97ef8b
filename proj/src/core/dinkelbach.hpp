// Joint sub-carrier / power allocator: maximizes the fractional objective
// U = numerator/denominator by Dinkelbach's subtractive reformulation
// V(q) = numerator - q*denominator, with the root of F(q) = max V(q) located
// by bracketed bisection.
//
// Two inner maximizers are available:
//   * KktVerbatim - cyclic closed-form coordinate updates transcribed from
//     the source derivation (kept verbatim, known transcription defects are
//     cross-checked by the errata report); best-effort, falls back to the
//     numeric path on non-physical or infeasible iterates.
//   * Numeric - derivative-free per-n maximization over (a, b); this is the
//     authoritative path.
#pragma once

#include <optional>
#include <vector>

#include "core/model.hpp"

namespace muofdm::dinkelbach {

// Closed-form coordinate update for the data power a, given b, n and q.
// Returns nullopt when the update is non-physical (q <= 0, zero or negative
// denominator, non-positive or non-finite result).
std::optional<double> update_a(const SystemParams& params, double b, int n, double q);

// Closed-form coordinate update for the reference power b, given a, n and q.
std::optional<double> update_b(const SystemParams& params, double a, int n, double q);

// Integer candidates for n from the transcribed stationarity quadratic
// a1*n^2 + a2*n + a3 = 0: floor/ceil of each real root clamped to [1, m-1],
// always including the endpoints {1, m-1} so the set is never empty.
std::vector<int> solve_n_quadratic(const SystemParams& params, double a, double b,
                                   double q);

enum class InnerMethod { KktVerbatim, Numeric };

struct InnerResult {
    Allocation alloc;
    double v = 0.0;          // V at alloc for the queried q
    bool used_fallback = false;  // KktVerbatim requested but numeric path used
};

// max over feasible (n, a, b) of V(., q) subject to
// a, b in (0, budget], (m-n)*a + n*b <= budget, n in [1, m-1].
InnerResult inner_maximize(const SystemParams& params, double budget, double q,
                           InnerMethod method);

struct TracePoint {
    double q = 0.0;
    double f = 0.0;  // F(q) = max V(., q)
};

struct SolveOptions {
    double epsilon = 1e-9;    // halt once |F(q)| < epsilon
    double q_hi_init = 1.0;   // first upper-bracket guess, doubled as needed
    int max_doublings = 128;
    int max_bisections = 200;
    InnerMethod inner = InnerMethod::Numeric;
};

struct DinkelbachResult {
    double q_star = 0.0;
    Allocation alloc_star;
    double u_star = 0.0;      // ratio_u evaluated at alloc_star
    double v_residual = 0.0;  // F at q_star
    int bracket_iterations = 0;
    int bisection_iterations = 0;
    bool converged = false;
    int kkt_fallbacks = 0;    // inner calls that abandoned the verbatim path
    std::vector<TracePoint> trace;  // every (q, F(q)) evaluated, in call order
};

DinkelbachResult bisection_solve(const SystemParams& params, double budget,
                                 const SolveOptions& options = {});

// Exhaustive log-grid search over (n, a, b), the independent check for the
// solver.  Points are log-spaced on [min_frac*budget, budget] inclusive;
// infeasible combinations are skipped; ties resolve to the first point in
// (n asc, a asc, b asc) scan order.
struct GridSpec {
    int a_points = 50;
    int b_points = 50;
    double min_frac = 1e-4;
};

struct GridResult {
    Allocation alloc;
    double u = 0.0;
};

GridResult grid_oracle(const SystemParams& params, double budget,
                       const GridSpec& spec = {});

}  // namespace muofdm::dinkelbach
