#include "core/model.hpp"

#include <cmath>
#include <stdexcept>

namespace muofdm {

double power_sum(const SystemParams& params, const Allocation& alloc) {
    return static_cast<double>(params.m - alloc.n) * alloc.a +
           static_cast<double>(alloc.n) * alloc.b;
}

double ebn0_db_to_linear(double ebn0_db, double n0) {
    if (!std::isfinite(ebn0_db)) {
        throw std::invalid_argument("ebn0_db_to_linear: ebn0_db must be finite");
    }
    if (!std::isfinite(n0) || n0 <= 0.0) {
        throw std::invalid_argument("ebn0_db_to_linear: n0 must be finite and > 0");
    }
    return n0 * std::pow(10.0, ebn0_db / 10.0);
}

std::vector<std::string> validate(const SystemParams& params) {
    std::vector<std::string> v;
    if (params.m < 2) v.push_back("m must be >= 2");
    if (params.beta < 1) v.push_back("beta must be >= 1");
    if (params.p < 1) v.push_back("p must be >= 1");
    if (!std::isfinite(params.n0) || params.n0 <= 0.0) v.push_back("n0 must be finite and > 0");
    if (!std::isfinite(params.eb) || params.eb <= 0.0) v.push_back("eb must be finite and > 0");
    return v;
}

std::vector<std::string> validate(const SystemParams& params,
                                  const Allocation& alloc,
                                  std::optional<double> budget) {
    std::vector<std::string> v = validate(params);
    if (alloc.n < 1 || alloc.n > params.m - 1) {
        v.push_back("n must lie in [1, m-1]");
    }
    if (!std::isfinite(alloc.a) || alloc.a <= 0.0) v.push_back("a must be finite and > 0");
    if (!std::isfinite(alloc.b) || alloc.b <= 0.0) v.push_back("b must be finite and > 0");
    if (budget) {
        if (!std::isfinite(*budget) || *budget <= 0.0) {
            v.push_back("power budget must be finite and > 0");
        } else {
            const double ps = power_sum(params, alloc);
            if (std::isfinite(ps) && ps > *budget) {
                v.push_back("power_sum exceeds the budget");
            }
        }
    }
    return v;
}

}  // namespace muofdm
