#include "core/cardano.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "core/analytic.hpp"

namespace muofdm::cardano {

CubicCoeffs cubic_coeffs(const SystemParams& params) {
    if (!validate(params).empty()) {
        throw std::invalid_argument("cubic_coeffs: invalid system parameters");
    }
    const double m = params.m;
    const double beta = params.beta;
    const double p = params.p;
    const double n0 = params.n0;
    const double eb = params.eb;

    CubicCoeffs c;
    c.a3 = -2.0 * eb * (p * n0 + 2.0 * p - 2.0);
    c.a2 = 2.0 * eb * (p * m * n0 + 2.0 * p * m - 2.0 * m - 2.0 * p * n0);
    c.a1 = 3.0 * m * n0 * (2.0 * p * eb + beta * n0);
    c.a0 = -m * m * n0 * (2.0 * p * eb + beta * n0);
    return c;
}

DepressedCubic depress(const CubicCoeffs& coeffs) {
    if (coeffs.a3 == 0.0) {
        throw std::invalid_argument("depress: leading coefficient is zero");
    }
    const double b = coeffs.a2 / coeffs.a3;
    const double c = coeffs.a1 / coeffs.a3;
    const double d = coeffs.a0 / coeffs.a3;

    DepressedCubic dc;
    dc.zeta = c - b * b / 3.0;
    dc.xi = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    dc.delta = dc.zeta * dc.zeta * dc.zeta / 27.0 + dc.xi * dc.xi / 4.0;
    dc.shift = -b / 3.0;
    return dc;
}

namespace {

double newton_polish(double x, double zeta, double xi) {
    for (int i = 0; i < 3; ++i) {
        const double f = (x * x + zeta) * x + xi;
        const double fp = 3.0 * x * x + zeta;
        if (fp == 0.0) break;
        const double step = f / fp;
        x -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

}  // namespace

std::vector<double> real_roots(const DepressedCubic& dc) {
    std::vector<double> xs;
    if (dc.delta > 0.0) {
        // One real root.
        const double s = std::sqrt(dc.delta);
        xs.push_back(std::cbrt(-dc.xi / 2.0 + s) + std::cbrt(-dc.xi / 2.0 - s));
    } else if (dc.zeta == 0.0) {
        // delta <= 0 with zeta == 0 forces xi == 0: a (possibly triple) root.
        xs.push_back(-std::cbrt(dc.xi));
    } else {
        // Three real roots via the trigonometric form (zeta < 0 here).
        const double s = 2.0 * std::sqrt(-dc.zeta / 3.0);
        double arg = (3.0 * dc.xi) / (2.0 * dc.zeta) * std::sqrt(-3.0 / dc.zeta);
        arg = std::clamp(arg, -1.0, 1.0);
        const double theta = std::acos(arg) / 3.0;
        for (int j = 0; j < 3; ++j) {
            xs.push_back(s * std::cos(theta - 2.0 * std::numbers::pi * j / 3.0));
        }
    }

    std::vector<double> roots;
    for (double x : xs) {
        const double polished = newton_polish(x, dc.zeta, dc.xi) + dc.shift;
        const bool duplicate = std::any_of(roots.begin(), roots.end(), [&](double r) {
            return std::abs(r - polished) <= 1e-9 * std::max(1.0, std::abs(polished));
        });
        if (!duplicate) roots.push_back(polished);
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

namespace {

int argmin_objective(const SystemParams& params, const std::vector<int>& candidates) {
    int best_n = -1;
    double best_val = 0.0;
    for (int n : candidates) {
        const double val = analytic::objective_sa(params, n);
        if (best_n < 0 || val < best_val || (val == best_val && n < best_n)) {
            best_n = n;
            best_val = val;
        }
    }
    return best_n;
}

}  // namespace

int optimal_n_closed_form(const SystemParams& params) {
    const DepressedCubic dc = depress(cubic_coeffs(params));
    std::vector<int> candidates = {1, params.m - 1};
    for (double r : real_roots(dc)) {
        if (r > 0.0 && r < static_cast<double>(params.m)) {
            const int lo = static_cast<int>(std::floor(r));
            const int hi = static_cast<int>(std::ceil(r));
            for (int n : {lo, hi}) {
                if (n >= 1 && n <= params.m - 1) candidates.push_back(n);
            }
        }
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    return argmin_objective(params, candidates);
}

int optimal_n_bruteforce(const SystemParams& params) {
    if (!validate(params).empty()) {
        throw std::invalid_argument("optimal_n_bruteforce: invalid system parameters");
    }
    std::vector<int> all;
    all.reserve(static_cast<std::size_t>(params.m - 1));
    for (int n = 1; n <= params.m - 1; ++n) all.push_back(n);
    return argmin_objective(params, all);
}

}  // namespace muofdm::cardano
