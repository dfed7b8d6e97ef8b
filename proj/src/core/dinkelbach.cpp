#include "core/dinkelbach.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "core/analytic.hpp"

namespace muofdm::dinkelbach {

namespace {

// V = 2*n*a*b*(m-n)^2*eb^2
//     - q * [ (m-n)*eb*sc*(2*(a*p+b)*(n+1)*n0 + 4*a*b*(p-1)*n) + beta*n0^2*sc^2 ]
// evaluated without the validation overhead of the public entry points;
// callers guarantee a, b > 0 and 1 <= n <= m-1.
double v_eval(const SystemParams& prm, int n, double a, double b, double q) {
    const double m = prm.m;
    const double beta = prm.beta;
    const double p = prm.p;
    const double n0 = prm.n0;
    const double eb = prm.eb;
    const double nn = n;
    const double mn = m - nn;
    const double sc = mn * a + nn * b;
    const double num = 2.0 * nn * a * b * mn * mn * eb * eb;
    const double den =
        mn * eb * sc * (2.0 * (a * p + b) * (nn + 1.0) * n0 + 4.0 * a * b * (p - 1.0) * nn) +
        beta * n0 * n0 * sc * sc;
    return num - q * den;
}

std::optional<double> physical_or_nothing(double value) {
    if (!std::isfinite(value) || value <= 0.0) return std::nullopt;
    return value;
}

void require_params(const SystemParams& params) {
    if (!validate(params).empty()) {
        throw std::invalid_argument("dinkelbach: invalid system parameters");
    }
}

void require_update_inputs(const SystemParams& params, double power, int n, double q) {
    require_params(params);
    if (n < 1 || n > params.m - 1) {
        throw std::invalid_argument("dinkelbach: n must lie in [1, m-1]");
    }
    if (!std::isfinite(power) || power <= 0.0) {
        throw std::invalid_argument("dinkelbach: power value must be finite and > 0");
    }
    if (!std::isfinite(q)) {
        throw std::invalid_argument("dinkelbach: q must be finite");
    }
}

}  // namespace

std::optional<double> update_a(const SystemParams& params, double b, int n, double q) {
    require_update_inputs(params, b, n, q);
    const double m = params.m;
    const double beta = params.beta;
    const double p = params.p;
    const double n0 = params.n0;
    const double eb = params.eb;
    const double nn = n;
    const double mn = m - nn;

    const double num = nn * b * eb * eb * mn * mn
                     - q * m * (nn + 1.0) * mn * eb * n0 * b
                     - q * beta * n0 * n0 * nn * b * m
                     - 2.0 * q * nn * nn * b * b * eb * (p - 1.0) * mn;
    const double den = 2.0 * q * (nn + 1.0) * mn * mn * eb * n0 * p
                     + q * beta * n0 * n0 * mn * mn
                     + 4.0 * q * mn * mn * nn * b * eb * (p - 1.0);
    if (den == 0.0) return std::nullopt;
    return physical_or_nothing(num / den);
}

std::optional<double> update_b(const SystemParams& params, double a, int n, double q) {
    require_update_inputs(params, a, n, q);
    const double m = params.m;
    const double beta = params.beta;
    const double p = params.p;
    const double n0 = params.n0;
    const double eb = params.eb;
    const double nn = n;
    const double mn = m - nn;

    const double num = mn * a * (nn * mn * eb * eb
                                 + q * (nn + 1.0) * eb * n0 * (nn - p * nn - m)
                                 - q * beta * n0 * n0 * nn
                                 - 2.0 * q * nn * a * eb * (p - 1.0) * mn);
    const double den = q * beta * n0 * n0 * nn * nn
                     + q * nn * ((nn + 1.0) * mn * eb * n0
                                 + 4.0 * nn * a * eb * (p - 1.0) * mn);
    if (den == 0.0) return std::nullopt;
    return physical_or_nothing(num / den);
}

std::vector<int> solve_n_quadratic(const SystemParams& params, double a, double b,
                                   double q) {
    require_update_inputs(params, a, 1, q);
    if (!std::isfinite(b) || b <= 0.0) {
        throw std::invalid_argument("dinkelbach: power value must be finite and > 0");
    }
    const double m = params.m;
    const double beta = params.beta;
    const double p = params.p;
    const double n0 = params.n0;
    const double eb = params.eb;

    const double a1 = 3.0 * (a * b * eb * eb
                             + q * (a - b) * ((a * p + b) * eb * n0
                                              - 2.0 * a * b * (p - 1.0) * eb));
    const double a2 = -2.0 * m * a * b * eb * eb
                    + 2.0 * q * (a * p + b) * eb * n0 * (2.0 * m * a - m * b + a + b)
                    - q * beta * n0 * n0 * (a + b) * (a + b)
                    + 4.0 * a * b * eb * (p - 1.0) * q * m * (a - b);
    // NB: the "- 2.0*b - 2.0*b" below is intentional -- this transcribed
    // stationarity expression is kept exactly as written and cross-checked
    // against the numeric maximizer by the errata report.
    const double a3 = m * (a * b * eb * eb
                           + q * (a * p + b) * eb * n0 * (m * a - 2.0 * b - 2.0 * b)
                           + q * beta * n0 * n0 * a * (a + b)
                           - 2.0 * a * a * b * eb * (p - 1.0) * q * m);

    std::vector<double> roots;
    if (a1 != 0.0) {
        const double disc = a2 * a2 - 4.0 * a1 * a3;
        if (disc >= 0.0) {
            const double s = std::sqrt(disc);
            roots.push_back((-a2 + s) / (2.0 * a1));
            roots.push_back((-a2 - s) / (2.0 * a1));
        }
    } else if (a2 != 0.0) {
        roots.push_back(-a3 / a2);
    }

    std::vector<int> candidates = {1, params.m - 1};
    for (double r : roots) {
        if (!std::isfinite(r)) continue;
        for (double edge : {std::floor(r), std::ceil(r)}) {
            const int n = static_cast<int>(edge);
            if (n >= 1 && n <= params.m - 1) candidates.push_back(n);
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    return candidates;
}

namespace {

struct LinePoint {
    double x = 0.0;
    double value = 0.0;
};

// Derivative-free maximization of g over [lo, hi]: a 33-point coarse scan
// locates the best cell, then golden-section refinement narrows it.  The
// best point ever evaluated is returned, so the result never regresses
// below the scan maximum even if g is not unimodal.
template <typename G>
LinePoint line_max(double lo, double hi, const G& g) {
    LinePoint best{lo, g(lo)};
    if (!(hi > lo)) return best;

    constexpr int kScanPoints = 33;
    double cell_lo = lo;
    double cell_hi = hi;
    int best_index = 0;
    for (int i = 1; i < kScanPoints; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) /
                                  static_cast<double>(kScanPoints - 1);
        const double v = g(x);
        if (v > best.value) {
            best = {x, v};
            best_index = i;
        }
    }
    const double step = (hi - lo) / static_cast<double>(kScanPoints - 1);
    cell_lo = std::max(lo, lo + step * (best_index - 1));
    cell_hi = std::min(hi, lo + step * (best_index + 1));

    constexpr double kInvPhi = 0.6180339887498949;
    double x1 = cell_hi - kInvPhi * (cell_hi - cell_lo);
    double x2 = cell_lo + kInvPhi * (cell_hi - cell_lo);
    double f1 = g(x1);
    double f2 = g(x2);
    if (f1 > best.value) best = {x1, f1};
    if (f2 > best.value) best = {x2, f2};
    for (int i = 0; i < 60 && cell_hi - cell_lo > 1e-14 * std::max(1.0, std::abs(cell_hi));
         ++i) {
        if (f1 >= f2) {
            cell_hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = cell_hi - kInvPhi * (cell_hi - cell_lo);
            f1 = g(x1);
            if (f1 > best.value) best = {x1, f1};
        } else {
            cell_lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = cell_lo + kInvPhi * (cell_hi - cell_lo);
            f2 = g(x2);
            if (f2 > best.value) best = {x2, f2};
        }
    }
    return best;
}

struct PointV {
    double a = 0.0;
    double b = 0.0;
    double v = 0.0;
};

// Numeric maximization of V(., q) for one fixed n over
// { a, b in [floor, budget], (m-n)a + nb <= budget }.
PointV numeric_inner_fixed_n(const SystemParams& prm, double budget, double q, int n) {
    const double mn = static_cast<double>(prm.m - n);
    const double nd = static_cast<double>(n);
    const double floor_pow = 1e-9 * budget;

    const auto eval = [&](double a, double b) { return v_eval(prm, n, a, b, q); };
    const auto consider = [&](PointV& best, double a, double b) {
        a = std::clamp(a, floor_pow, budget);
        b = std::clamp(b, floor_pow, budget);
        if (mn * a + nd * b > budget * (1.0 + 1e-12)) return;
        const double v = eval(a, b);
        if (v > best.v) best = {a, b, v};
    };

    PointV best{budget / prm.m, budget / prm.m,
                eval(budget / prm.m, budget / prm.m)};

    // Budget boundary: a = s*budget/(m-n), b = (1-s)*budget/n.
    {
        const auto g = [&](double s) {
            return eval(s * budget / mn, (1.0 - s) * budget / nd);
        };
        const LinePoint lp = line_max(1e-6, 1.0 - 1e-6, g);
        consider(best, lp.x * budget / mn, (1.0 - lp.x) * budget / nd);
    }

    double prev_v = best.v;
    for (int iter = 0; iter < 48; ++iter) {
        // Scale sweep along the ray through the current best point.
        {
            const double a0 = best.a;
            const double b0 = best.b;
            const double ps = mn * a0 + nd * b0;
            const double t_hi =
                std::min({budget / ps, budget / a0, budget / b0});
            const double t_lo = std::max(floor_pow / a0, floor_pow / b0);
            if (t_hi > t_lo) {
                const auto g = [&](double t) { return eval(t * a0, t * b0); };
                const LinePoint lp = line_max(t_lo, t_hi, g);
                consider(best, lp.x * a0, lp.x * b0);
            }
        }
        // Ratio sweep at fixed a+b.
        {
            const double c = best.a + best.b;
            double r_lo = floor_pow / c;
            double r_hi = 1.0 - floor_pow / c;
            // Feasibility (m-n)rc + n(1-r)c <= budget is linear in r.
            const double coef = (mn - nd) * c;
            const double rhs = budget - nd * c;
            if (coef > 0.0) {
                r_hi = std::min(r_hi, rhs / coef);
            } else if (coef < 0.0) {
                r_lo = std::max(r_lo, rhs / coef);
            } else if (nd * c > budget) {
                r_hi = r_lo - 1.0;  // empty
            }
            r_lo = std::max(r_lo, floor_pow / c);
            r_hi = std::min({r_hi, 1.0 - floor_pow / c, budget / c});
            if (r_hi > r_lo) {
                const auto g = [&](double r) { return eval(r * c, (1.0 - r) * c); };
                const LinePoint lp = line_max(r_lo, r_hi, g);
                consider(best, lp.x * c, (1.0 - lp.x) * c);
            }
        }
        // Coordinate sweeps.
        {
            const double b0 = best.b;
            const double cap = std::min(budget, (budget - nd * b0) / mn);
            if (cap > floor_pow) {
                const auto g = [&](double a) { return eval(a, b0); };
                const LinePoint lp = line_max(floor_pow, cap, g);
                consider(best, lp.x, b0);
            }
        }
        {
            const double a0 = best.a;
            const double cap = std::min(budget, (budget - mn * a0) / nd);
            if (cap > floor_pow) {
                const auto g = [&](double b) { return eval(a0, b); };
                const LinePoint lp = line_max(floor_pow, cap, g);
                consider(best, a0, lp.x);
            }
        }
        if (best.v - prev_v <= 1e-16 + 1e-13 * std::abs(best.v)) break;
        prev_v = best.v;
    }
    return best;
}

InnerResult numeric_inner(const SystemParams& prm, double budget, double q) {
    InnerResult result;
    bool first = true;
    for (int n = 1; n <= prm.m - 1; ++n) {
        const PointV pv = numeric_inner_fixed_n(prm, budget, q, n);
        if (first || pv.v > result.v) {
            result.alloc = Allocation{n, pv.a, pv.b};
            result.v = pv.v;
            first = false;
        }
    }
    return result;
}

std::optional<InnerResult> kkt_inner(const SystemParams& prm, double budget, double q) {
    const double uniform = budget / prm.m;
    double a = uniform;
    double b = uniform;

    // Start n at the best V for the uniform powers.
    int n = 1;
    double best_v = v_eval(prm, 1, a, b, q);
    for (int cand = 2; cand <= prm.m - 1; ++cand) {
        const double v = v_eval(prm, cand, a, b, q);
        if (v > best_v) {
            best_v = v;
            n = cand;
        }
    }

    constexpr double kDamping = 0.5;
    constexpr int kMaxSweeps = 200;
    for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
        const std::optional<double> a_raw = update_a(prm, b, n, q);
        if (!a_raw) return std::nullopt;
        const double a_new = a + kDamping * (*a_raw - a);
        if (!std::isfinite(a_new) || a_new <= 0.0) return std::nullopt;

        const std::optional<double> b_raw = update_b(prm, a_new, n, q);
        if (!b_raw) return std::nullopt;
        const double b_new = b + kDamping * (*b_raw - b);
        if (!std::isfinite(b_new) || b_new <= 0.0) return std::nullopt;

        int n_new = n;
        double n_best = v_eval(prm, n, a_new, b_new, q);
        for (int cand : solve_n_quadratic(prm, a_new, b_new, q)) {
            const double v = v_eval(prm, cand, a_new, b_new, q);
            if (v > n_best) {
                n_best = v;
                n_new = cand;
            }
        }

        const double rel = std::max(std::abs(a_new - a) / std::max(a, 1e-300),
                                    std::abs(b_new - b) / std::max(b, 1e-300));
        a = a_new;
        b = b_new;
        const bool n_stable = (n_new == n);
        n = n_new;
        if (rel < 1e-8 && n_stable) {
            const Allocation alloc{n, a, b};
            if (!validate(prm, alloc, budget).empty()) return std::nullopt;
            return InnerResult{alloc, v_eval(prm, n, a, b, q), false};
        }
    }
    return std::nullopt;  // no convergence within the sweep budget
}

}  // namespace

InnerResult inner_maximize(const SystemParams& params, double budget, double q,
                           InnerMethod method) {
    require_params(params);
    if (!std::isfinite(budget) || budget <= 0.0) {
        throw std::invalid_argument("inner_maximize: budget must be finite and > 0");
    }
    if (!std::isfinite(q) || q < 0.0) {
        throw std::invalid_argument("inner_maximize: q must be finite and >= 0");
    }
    if (method == InnerMethod::KktVerbatim) {
        if (std::optional<InnerResult> r = kkt_inner(params, budget, q)) return *r;
        InnerResult fallback = numeric_inner(params, budget, q);
        fallback.used_fallback = true;
        return fallback;
    }
    return numeric_inner(params, budget, q);
}

DinkelbachResult bisection_solve(const SystemParams& params, double budget,
                                 const SolveOptions& options) {
    require_params(params);
    if (!std::isfinite(budget) || budget <= 0.0) {
        throw std::invalid_argument("bisection_solve: budget must be finite and > 0");
    }
    if (!(options.epsilon > 0.0) || !(options.q_hi_init > 0.0)) {
        throw std::invalid_argument("bisection_solve: epsilon and q_hi_init must be > 0");
    }

    DinkelbachResult result;
    const auto probe = [&](double q) {
        InnerResult inner = inner_maximize(params, budget, q, options.inner);
        if (inner.used_fallback) ++result.kkt_fallbacks;
        result.trace.push_back(TracePoint{q, inner.v});
        return inner;
    };
    const auto finish = [&](double q, const InnerResult& inner, bool converged) {
        result.q_star = q;
        result.alloc_star = inner.alloc;
        result.u_star = analytic::ratio_u(params, inner.alloc);
        result.v_residual = inner.v;
        result.converged = converged;
        return result;
    };

    // Allocations with near-zero total power are feasible, so for every
    // q >= q* the maximum of V is ~0 from below; a tiny |V| therefore
    // certifies convergence only on the q <= q* side where V >= 0.  A
    // negative V carries sign information for the bracket and nothing else.
    double q_lo = 0.0;
    InnerResult lo_inner = probe(q_lo);
    if (lo_inner.v < options.epsilon) {
        return finish(q_lo, lo_inner, lo_inner.v >= 0.0);
    }

    double q_hi = options.q_hi_init;
    InnerResult hi_inner = probe(q_hi);
    ++result.bracket_iterations;
    while (hi_inner.v >= 0.0) {
        if (hi_inner.v < options.epsilon) {
            return finish(q_hi, hi_inner, true);
        }
        if (result.bracket_iterations >= options.max_doublings) {
            return finish(q_hi, hi_inner, false);
        }
        q_lo = q_hi;
        lo_inner = hi_inner;
        q_hi *= 2.0;
        hi_inner = probe(q_hi);
        ++result.bracket_iterations;
    }

    for (int i = 0; i < options.max_bisections; ++i) {
        const double q_mid = 0.5 * (q_lo + q_hi);
        const InnerResult mid_inner = probe(q_mid);
        ++result.bisection_iterations;
        if (mid_inner.v >= 0.0) {
            if (mid_inner.v < options.epsilon) {
                return finish(q_mid, mid_inner, true);
            }
            q_lo = q_mid;
            lo_inner = mid_inner;
        } else {
            q_hi = q_mid;
        }
        if (q_hi - q_lo <= 1e-15 * std::max(1.0, q_hi)) {
            break;  // bracket exhausted at floating-point resolution
        }
    }
    return finish(q_lo, lo_inner, lo_inner.v >= 0.0 && lo_inner.v < options.epsilon);
}

GridResult grid_oracle(const SystemParams& params, double budget, const GridSpec& spec) {
    require_params(params);
    if (!std::isfinite(budget) || budget <= 0.0) {
        throw std::invalid_argument("grid_oracle: budget must be finite and > 0");
    }
    if (spec.a_points < 2 || spec.b_points < 2 || !(spec.min_frac > 0.0) ||
        !(spec.min_frac < 1.0)) {
        throw std::invalid_argument("grid_oracle: malformed grid spec");
    }

    const auto grid_value = [&](int i, int points) {
        const double lo = std::log(spec.min_frac * budget);
        const double hi = std::log(budget);
        return std::exp(lo + (hi - lo) * static_cast<double>(i) /
                                 static_cast<double>(points - 1));
    };

    GridResult best;
    bool first = true;
    for (int n = 1; n <= params.m - 1; ++n) {
        const double mn = static_cast<double>(params.m - n);
        const double nd = static_cast<double>(n);
        for (int ia = 0; ia < spec.a_points; ++ia) {
            const double a = grid_value(ia, spec.a_points);
            for (int ib = 0; ib < spec.b_points; ++ib) {
                const double b = grid_value(ib, spec.b_points);
                if (mn * a + nd * b > budget) continue;
                const double num = 2.0 * nd * a * b * mn * mn * params.eb * params.eb;
                const double sc = mn * a + nd * b;
                const double den =
                    mn * params.eb * sc *
                        (2.0 * (a * params.p + b) * (nd + 1.0) * params.n0 +
                         4.0 * a * b * (params.p - 1.0) * nd) +
                    params.beta * params.n0 * params.n0 * sc * sc;
                const double u = num / den;
                if (first || u > best.u) {
                    best.alloc = Allocation{n, a, b};
                    best.u = u;
                    first = false;
                }
            }
        }
    }
    if (first) {
        throw std::invalid_argument("grid_oracle: no feasible grid point");
    }
    return best;
}

}  // namespace muofdm::dinkelbach
