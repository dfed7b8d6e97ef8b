// C boundary: translates between the C structs in muofdm/muofdm.h and the
// C++ core, and maps exceptions onto status codes.  No exception may cross
// this file.
#include "muofdm/muofdm.h"

#include <algorithm>
#include <cstdlib>
#include <cstring>
#include <new>
#include <optional>
#include <stdexcept>
#include <string>

#include "core/analytic.hpp"
#include "core/cardano.hpp"
#include "core/dinkelbach.hpp"
#include "core/errata.hpp"
#include "core/model.hpp"
#include "core/simulator.hpp"

namespace {

using muofdm::Allocation;
using muofdm::SystemParams;

SystemParams to_params(const muofdm_params& c) {
    SystemParams prm;
    prm.m = c.m;
    prm.beta = c.beta;
    prm.p = c.p;
    prm.n0 = c.n0;
    prm.eb = c.eb;
    return prm;
}

Allocation to_alloc(const muofdm_alloc& c) {
    Allocation alloc;
    alloc.n = c.n;
    alloc.a = c.a;
    alloc.b = c.b;
    return alloc;
}

muofdm_alloc from_alloc(const Allocation& alloc) {
    muofdm_alloc c;
    c.n = alloc.n;
    c.a = alloc.a;
    c.b = alloc.b;
    return c;
}

// Runs fn inside the exception barrier shared by every entry point.
template <typename Fn>
muofdm_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const std::invalid_argument&) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    } catch (const std::domain_error&) {
        return MUOFDM_ERR_DEGENERATE;
    } catch (const std::bad_alloc&) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    } catch (...) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    }
}

}  // namespace

struct muofdm_sim {
    SystemParams params;
    Allocation alloc;
    muofdm::sim::SimOptions options;
    std::uint64_t frames_done = 0;
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
};

extern "C" {

const char* muofdm_status_name(muofdm_status status) {
    switch (status) {
        case MUOFDM_OK: return "MUOFDM_OK";
        case MUOFDM_ERR_INVALID_ARGUMENT: return "MUOFDM_ERR_INVALID_ARGUMENT";
        case MUOFDM_ERR_VALIDATION: return "MUOFDM_ERR_VALIDATION";
        case MUOFDM_ERR_NO_CONVERGENCE: return "MUOFDM_ERR_NO_CONVERGENCE";
        case MUOFDM_ERR_DEGENERATE: return "MUOFDM_ERR_DEGENERATE";
    }
    return "MUOFDM_STATUS_UNKNOWN";
}

const char* muofdm_version(void) { return "1.0.0"; }

muofdm_status muofdm_ebn0_db_to_linear(double db, double n0, double* out) {
    if (out == nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = muofdm::ebn0_db_to_linear(db, n0);
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_validate(const muofdm_params* params, const muofdm_alloc* alloc,
                              const double* budget, char* msg_buf, size_t msg_buf_len,
                              int32_t* violation_count) {
    if (params == nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
    if (alloc == nullptr && budget != nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        std::vector<std::string> violations;
        if (alloc != nullptr) {
            violations = muofdm::validate(
                to_params(*params), to_alloc(*alloc),
                budget != nullptr ? std::optional<double>(*budget) : std::nullopt);
        } else {
            violations = muofdm::validate(to_params(*params));
        }
        if (violation_count != nullptr) {
            *violation_count = static_cast<int32_t>(violations.size());
        }
        if (msg_buf != nullptr && msg_buf_len > 0) {
            std::string joined;
            for (const std::string& v : violations) {
                if (!joined.empty()) joined += '\n';
                joined += v;
            }
            const size_t copy = std::min(joined.size(), msg_buf_len - 1);
            std::memcpy(msg_buf, joined.data(), copy);
            msg_buf[copy] = '\0';
        }
        return violations.empty() ? MUOFDM_OK : MUOFDM_ERR_VALIDATION;
    });
}

muofdm_status muofdm_objective_sa(const muofdm_params* params, int32_t n, double* out) {
    if (params == nullptr || out == nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = muofdm::analytic::objective_sa(to_params(*params), n);
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_ber_sa(const muofdm_params* params, int32_t n, double* out) {
    if (params == nullptr || out == nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = muofdm::analytic::ber_sa(to_params(*params), n);
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_ratio_parts(const muofdm_params* params, const muofdm_alloc* alloc,
                                 double* numerator, double* denominator) {
    if (params == nullptr || alloc == nullptr || numerator == nullptr ||
        denominator == nullptr) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const muofdm::analytic::RatioParts parts =
            muofdm::analytic::ratio_parts(to_params(*params), to_alloc(*alloc));
        *numerator = parts.numerator;
        *denominator = parts.denominator;
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_ratio_u(const muofdm_params* params, const muofdm_alloc* alloc,
                             double* out) {
    if (params == nullptr || alloc == nullptr || out == nullptr) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = muofdm::analytic::ratio_u(to_params(*params), to_alloc(*alloc));
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_ber_psa(const muofdm_params* params, const muofdm_alloc* alloc,
                             double* out) {
    if (params == nullptr || alloc == nullptr || out == nullptr) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = muofdm::analytic::ber_psa(to_params(*params), to_alloc(*alloc));
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_dinkelbach_v(const muofdm_params* params, const muofdm_alloc* alloc,
                                  double q, double* out) {
    if (params == nullptr || alloc == nullptr || out == nullptr) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        *out = muofdm::analytic::dinkelbach_v(to_params(*params), to_alloc(*alloc), q);
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_cubic_coeffs(const muofdm_params* params, double out[4]) {
    if (params == nullptr || out == nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        const muofdm::cardano::CubicCoeffs coeffs =
            muofdm::cardano::cubic_coeffs(to_params(*params));
        out[0] = coeffs.a3;
        out[1] = coeffs.a2;
        out[2] = coeffs.a1;
        out[3] = coeffs.a0;
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_depressed_cubic(const muofdm_params* params, double* zeta,
                                     double* xi, double* delta, double* shift) {
    if (params == nullptr || zeta == nullptr || xi == nullptr || delta == nullptr ||
        shift == nullptr) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const muofdm::cardano::DepressedCubic dc =
            muofdm::cardano::depress(muofdm::cardano::cubic_coeffs(to_params(*params)));
        *zeta = dc.zeta;
        *xi = dc.xi;
        *delta = dc.delta;
        *shift = dc.shift;
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_optimal_n_closed_form(const muofdm_params* params, int32_t* out) {
    if (params == nullptr || out == nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = muofdm::cardano::optimal_n_closed_form(to_params(*params));
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_optimal_n_bruteforce(const muofdm_params* params, int32_t* out) {
    if (params == nullptr || out == nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        *out = muofdm::cardano::optimal_n_bruteforce(to_params(*params));
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_dinkelbach_solve(const muofdm_params* params, double budget,
                                      const muofdm_solve_options* options,
                                      muofdm_dinkelbach_result* out) {
    if (params == nullptr || out == nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
    return guarded([&] {
        muofdm::dinkelbach::SolveOptions opts;
        if (options != nullptr) {
            opts.epsilon = options->epsilon;
            opts.q_hi_init = options->q_hi_init;
            opts.max_doublings = options->max_doublings;
            opts.max_bisections = options->max_bisections;
            opts.inner = options->inner == 1
                             ? muofdm::dinkelbach::InnerMethod::KktVerbatim
                             : muofdm::dinkelbach::InnerMethod::Numeric;
        }
        const muofdm::dinkelbach::DinkelbachResult result =
            muofdm::dinkelbach::bisection_solve(to_params(*params), budget, opts);
        out->q_star = result.q_star;
        out->alloc_star = from_alloc(result.alloc_star);
        out->u_star = result.u_star;
        out->v_residual = result.v_residual;
        out->bracket_iterations = result.bracket_iterations;
        out->bisection_iterations = result.bisection_iterations;
        out->converged = result.converged ? 1 : 0;
        out->kkt_fallbacks = result.kkt_fallbacks;
        return result.converged ? MUOFDM_OK : MUOFDM_ERR_NO_CONVERGENCE;
    });
}

muofdm_status muofdm_grid_oracle(const muofdm_params* params, double budget,
                                 int32_t a_points, int32_t b_points, double min_frac,
                                 muofdm_alloc* out_alloc, double* out_u) {
    if (params == nullptr || out_alloc == nullptr || out_u == nullptr) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        muofdm::dinkelbach::GridSpec spec;
        spec.a_points = a_points;
        spec.b_points = b_points;
        spec.min_frac = min_frac;
        const muofdm::dinkelbach::GridResult result =
            muofdm::dinkelbach::grid_oracle(to_params(*params), budget, spec);
        *out_alloc = from_alloc(result.alloc);
        *out_u = result.u;
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_sim_create(const muofdm_params* params, const muofdm_alloc* alloc,
                                const muofdm_sim_options* options, muofdm_sim** out) {
    if (params == nullptr || alloc == nullptr || out == nullptr) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    }
    *out = nullptr;
    return guarded([&] {
        const SystemParams prm = to_params(*params);
        const Allocation al = to_alloc(*alloc);
        const std::vector<std::string> violations =
            muofdm::validate(prm, al, std::nullopt);
        if (!violations.empty()) return MUOFDM_ERR_VALIDATION;

        muofdm::sim::SimOptions opts;
        if (options != nullptr) {
            opts.seed = options->seed;
            opts.shards = options->shards;
            opts.map = options->map == 1 ? muofdm::chaos::MapKind::Logistic
                                         : muofdm::chaos::MapKind::Chebyshev2;
            opts.confidence = options->confidence;
            if (!(opts.confidence > 0.0) || !(opts.confidence < 1.0) ||
                opts.shards < 0) {
                return MUOFDM_ERR_INVALID_ARGUMENT;
            }
        }
        *out = new muofdm_sim{prm, al, opts};
        return MUOFDM_OK;
    });
}

muofdm_status muofdm_sim_run(muofdm_sim* sim, uint64_t frames,
                             muofdm_ber_estimate* out) {
    if (sim == nullptr || out == nullptr || frames == 0) {
        return MUOFDM_ERR_INVALID_ARGUMENT;
    }
    return guarded([&] {
        muofdm::sim::SimOptions opts = sim->options;
        opts.first_frame = sim->frames_done;
        opts.frames = frames;
        const muofdm::sim::BerEstimate chunk =
            muofdm::sim::estimate_ber(sim->params, sim->alloc, opts);
        sim->frames_done += frames;
        sim->bits += chunk.bits;
        sim->errors += chunk.errors;

        const muofdm::sim::WilsonInterval ci = muofdm::sim::wilson_interval(
            sim->errors, sim->bits, sim->options.confidence);
        out->bits = sim->bits;
        out->errors = sim->errors;
        out->ber = static_cast<double>(sim->errors) / static_cast<double>(sim->bits);
        out->ci_low = ci.low;
        out->ci_high = ci.high;
        return MUOFDM_OK;
    });
}

void muofdm_sim_destroy(muofdm_sim* sim) { delete sim; }

muofdm_status muofdm_errata_report(char** out) {
    if (out == nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
    *out = nullptr;
    return guarded([&] {
        const std::string text = muofdm::errata::report();
        char* buf = static_cast<char*>(std::malloc(text.size() + 1));
        if (buf == nullptr) return MUOFDM_ERR_INVALID_ARGUMENT;
        std::memcpy(buf, text.data(), text.size() + 1);
        *out = buf;
        return MUOFDM_OK;
    });
}

void muofdm_string_free(char* s) { std::free(s); }

}  // extern "C"
