#include "core/analytic.hpp"

#include <cmath>
#include <stdexcept>

namespace muofdm::analytic {

namespace {

void require_valid(const SystemParams& params, int n) {
    if (!validate(params).empty()) {
        throw std::invalid_argument("analytic: invalid system parameters");
    }
    if (n < 1 || n > params.m - 1) {
        throw std::invalid_argument("analytic: n must lie in [1, m-1]");
    }
}

void require_valid(const SystemParams& params, const Allocation& alloc) {
    if (!validate(params, alloc).empty()) {
        throw std::invalid_argument("analytic: invalid parameters or allocation");
    }
}

}  // namespace

double objective_sa(const SystemParams& params, int n) {
    require_valid(params, n);
    const double m = params.m;
    const double beta = params.beta;
    const double p = params.p;
    const double n0 = params.n0;
    const double eb = params.eb;
    const double nn = n;

    const double t1 = ((nn + 1.0) / nn) * p * m * n0 / ((m - nn) * eb);
    const double t2 = beta * m * m * n0 * n0 / (2.0 * nn * (m - nn) * (m - nn) * eb * eb);
    const double t3 = 2.0 * (p - 1.0) * m / ((m - nn) * eb);
    return t1 + t2 + t3;
}

double ber_sa(const SystemParams& params, int n) {
    return 0.5 * std::erfc(1.0 / std::sqrt(objective_sa(params, n)));
}

RatioParts ratio_parts(const SystemParams& params, const Allocation& alloc) {
    require_valid(params, alloc);
    const double m = params.m;
    const double beta = params.beta;
    const double p = params.p;
    const double n0 = params.n0;
    const double eb = params.eb;
    const double nn = alloc.n;
    const double a = alloc.a;
    const double b = alloc.b;
    const double sum_c = (m - nn) * a + nn * b;

    RatioParts parts;
    parts.numerator = 2.0 * nn * a * b * (m - nn) * (m - nn) * eb * eb;
    parts.denominator =
        (m - nn) * eb * sum_c *
            (2.0 * (a * p + b) * (nn + 1.0) * n0 + 4.0 * a * b * (p - 1.0) * nn) +
        beta * n0 * n0 * sum_c * sum_c;
    return parts;
}

double ratio_u(const SystemParams& params, const Allocation& alloc) {
    const RatioParts parts = ratio_parts(params, alloc);
    return parts.numerator / parts.denominator;
}

double ber_psa(const SystemParams& params, const Allocation& alloc) {
    return 0.5 * std::erfc(std::sqrt(ratio_u(params, alloc)));
}

double dinkelbach_v(const SystemParams& params, const Allocation& alloc, double q) {
    if (!std::isfinite(q)) {
        throw std::invalid_argument("dinkelbach_v: q must be finite");
    }
    const RatioParts parts = ratio_parts(params, alloc);
    return parts.numerator - q * parts.denominator;
}

}  // namespace muofdm::analytic
