#include "core/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>

#include "core/rng.hpp"

namespace muofdm::sim {

namespace {

// Fixed stream indices: every per-frame random source hashes the frame seed
// with its own index, so streams never collide and results are independent
// of how frames are distributed over shards.
constexpr std::uint64_t kBitStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kChaosStreamBase = 16;  // + user index

void require_inputs(const SystemParams& params, const Allocation& alloc) {
    const std::vector<std::string> violations = validate(params, alloc, std::nullopt);
    if (!violations.empty()) {
        throw std::invalid_argument("simulator: " + violations.front());
    }
}

double chip_energy_target(const SystemParams& params, const Allocation& alloc) {
    const double mn = static_cast<double>(params.m - alloc.n);
    const double sum_c = mn * alloc.a + static_cast<double>(alloc.n) * alloc.b;
    return mn * params.eb / sum_c;
}

}  // namespace

Frame transmit_frame(const SystemParams& params, const Allocation& alloc,
                     chaos::MapKind map, std::uint64_t frame_seed) {
    require_inputs(params, alloc);

    Frame frame;
    frame.users = params.p;
    frame.data_carriers = params.m - alloc.n;
    frame.spread_factor = params.beta;
    frame.bits.resize(static_cast<std::size_t>(frame.data_carriers) * frame.users);
    frame.chips.resize(static_cast<std::size_t>(frame.users) * frame.spread_factor);
    frame.data.assign(static_cast<std::size_t>(frame.data_carriers) * frame.spread_factor,
                      0.0);

    rng::SplitMix64 bit_rng(rng::mix_seed(frame_seed, kBitStream));
    for (int& bit : frame.bits) {
        bit = (bit_rng.next() & 1u) ? 1 : -1;
    }

    const double target = chip_energy_target(params, alloc);
    for (int u = 0; u < frame.users; ++u) {
        const chaos::ChaoticSequence seq = chaos::normalize_energy(
            chaos::generate(map,
                            rng::mix_seed(frame_seed,
                                          kChaosStreamBase + static_cast<std::uint64_t>(u)),
                            frame.spread_factor),
            target);
        std::copy(seq.chips.begin(), seq.chips.end(),
                  frame.chips.begin() + static_cast<std::size_t>(u) * frame.spread_factor);
    }

    const double root_a = std::sqrt(alloc.a);
    for (int i = 0; i < frame.data_carriers; ++i) {
        double* carrier = frame.data.data() + static_cast<std::size_t>(i) * frame.spread_factor;
        for (int u = 0; u < frame.users; ++u) {
            const double weight =
                root_a * frame.bits[static_cast<std::size_t>(i) * frame.users + u];
            const double* chips =
                frame.chips.data() + static_cast<std::size_t>(u) * frame.spread_factor;
            for (int k = 0; k < frame.spread_factor; ++k) {
                carrier[k] += weight * chips[k];
            }
        }
    }
    return frame;
}

FrameObservation observe(const Frame& frame, const SystemParams& params,
                         const Allocation& alloc, std::uint64_t noise_seed, double n0) {
    require_inputs(params, alloc);
    if (!(n0 >= 0.0) || !std::isfinite(n0)) {
        throw std::invalid_argument("observe: n0 must be finite and >= 0");
    }

    FrameObservation obs;
    obs.users = frame.users;
    obs.data_carriers = frame.data_carriers;
    obs.spread_factor = frame.spread_factor;
    obs.data.resize(frame.data.size());
    obs.ref_avg.resize(static_cast<std::size_t>(frame.users) * frame.spread_factor);

    rng::NormalSource noise(rng::mix_seed(noise_seed, kNoiseStream));
    const double per_dim = std::sqrt(n0 / 2.0);

    for (std::size_t s = 0; s < frame.data.size(); ++s) {
        obs.data[s] = std::complex<double>(frame.data[s] + per_dim * noise.next(),
                                           per_dim * noise.next());
    }

    const double root_b = std::sqrt(alloc.b);
    const double inv_n = 1.0 / static_cast<double>(alloc.n);
    for (int u = 0; u < frame.users; ++u) {
        const double* chips =
            frame.chips.data() + static_cast<std::size_t>(u) * frame.spread_factor;
        std::complex<double>* avg =
            obs.ref_avg.data() + static_cast<std::size_t>(u) * frame.spread_factor;
        for (int k = 0; k < frame.spread_factor; ++k) {
            avg[k] = std::complex<double>(root_b * chips[k], 0.0);
        }
        for (int copy = 0; copy < alloc.n; ++copy) {
            for (int k = 0; k < frame.spread_factor; ++k) {
                avg[k] += std::complex<double>(per_dim * noise.next() * inv_n,
                                               per_dim * noise.next() * inv_n);
            }
        }
    }
    return obs;
}

DetectionResult detect(const FrameObservation& observation) {
    DetectionResult result;
    const std::size_t pairs =
        static_cast<std::size_t>(observation.data_carriers) * observation.users;
    result.metrics.resize(pairs);
    result.bits.resize(pairs);

    for (int i = 0; i < observation.data_carriers; ++i) {
        const std::complex<double>* carrier =
            observation.data.data() +
            static_cast<std::size_t>(i) * observation.spread_factor;
        for (int u = 0; u < observation.users; ++u) {
            const std::complex<double>* avg =
                observation.ref_avg.data() +
                static_cast<std::size_t>(u) * observation.spread_factor;
            double metric = 0.0;
            for (int k = 0; k < observation.spread_factor; ++k) {
                metric += carrier[k].real() * avg[k].real() +
                          carrier[k].imag() * avg[k].imag();
            }
            const std::size_t s = static_cast<std::size_t>(i) * observation.users + u;
            result.metrics[s] = metric;
            result.bits[s] = metric >= 0.0 ? 1 : -1;
        }
    }
    return result;
}

BerEstimate estimate_ber(const SystemParams& params, const Allocation& alloc,
                         const SimOptions& options) {
    require_inputs(params, alloc);
    if (options.frames == 0) {
        throw std::invalid_argument("estimate_ber: frames must be > 0");
    }
    if (options.shards < 0) {
        throw std::invalid_argument("estimate_ber: shards must be >= 0");
    }
    if (!(options.confidence > 0.0) || !(options.confidence < 1.0)) {
        throw std::invalid_argument("estimate_ber: confidence must lie in (0, 1)");
    }

    unsigned workers = options.shards > 0
                           ? static_cast<unsigned>(options.shards)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<std::uint64_t>(workers, options.frames));

    std::vector<std::vector<UserTally>> tallies(
        workers, std::vector<UserTally>(static_cast<std::size_t>(params.p)));

    const std::uint64_t frame_end = options.first_frame + options.frames;
    const auto run_shard = [&](unsigned shard) {
        std::vector<UserTally>& local = tallies[shard];
        for (std::uint64_t t = options.first_frame + shard; t < frame_end;
             t += workers) {
            const std::uint64_t frame_seed = rng::mix_seed(options.seed, t);
            const Frame frame = transmit_frame(params, alloc, options.map, frame_seed);
            const FrameObservation obs =
                observe(frame, params, alloc, frame_seed, params.n0);
            const DetectionResult decided = detect(obs);
            for (int i = 0; i < frame.data_carriers; ++i) {
                for (int u = 0; u < frame.users; ++u) {
                    const std::size_t s =
                        static_cast<std::size_t>(i) * frame.users + u;
                    ++local[static_cast<std::size_t>(u)].bits;
                    if (decided.bits[s] != frame.bits[s]) {
                        ++local[static_cast<std::size_t>(u)].errors;
                    }
                }
            }
        }
    };

    if (workers == 1) {
        run_shard(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(run_shard, w);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    BerEstimate estimate;
    estimate.per_user.assign(static_cast<std::size_t>(params.p), UserTally{});
    for (const std::vector<UserTally>& local : tallies) {
        for (std::size_t u = 0; u < local.size(); ++u) {
            estimate.per_user[u].bits += local[u].bits;
            estimate.per_user[u].errors += local[u].errors;
            estimate.bits += local[u].bits;
            estimate.errors += local[u].errors;
        }
    }
    estimate.ber = estimate.bits
                       ? static_cast<double>(estimate.errors) /
                             static_cast<double>(estimate.bits)
                       : 0.0;
    const WilsonInterval ci =
        wilson_interval(estimate.errors, estimate.bits, options.confidence);
    estimate.ci_low = ci.low;
    estimate.ci_high = ci.high;
    return estimate;
}

double reference_noise_probe(const SystemParams& params, const Allocation& alloc,
                             std::uint64_t seed, std::uint64_t frames) {
    require_inputs(params, alloc);
    if (frames == 0) {
        throw std::invalid_argument("reference_noise_probe: frames must be > 0");
    }

    const double root_b = std::sqrt(alloc.b);
    double sum = 0.0;
    double sum_sq = 0.0;
    std::uint64_t count = 0;
    for (std::uint64_t t = 0; t < frames; ++t) {
        const std::uint64_t frame_seed = rng::mix_seed(seed, t);
        const Frame frame =
            transmit_frame(params, alloc, chaos::MapKind::Chebyshev2, frame_seed);
        const FrameObservation obs =
            observe(frame, params, alloc, frame_seed, params.n0);
        const double* chips = frame.chips.data();
        for (int k = 0; k < frame.spread_factor; ++k) {
            const std::complex<double> residual =
                obs.ref_avg[static_cast<std::size_t>(k)] -
                std::complex<double>(root_b * chips[k], 0.0);
            for (double dim : {residual.real(), residual.imag()}) {
                sum += dim;
                sum_sq += dim * dim;
                ++count;
            }
        }
    }
    const double mean = sum / static_cast<double>(count);
    return sum_sq / static_cast<double>(count) - mean * mean;
}

double inverse_normal_cdf(double p) {
    if (!(p > 0.0) || !(p < 1.0)) {
        throw std::invalid_argument("inverse_normal_cdf: p must lie in (0, 1)");
    }
    // Acklam's rational approximation, |relative error| < 1.15e-9 before
    // refinement.
    static constexpr double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                   -2.759285104469687e+02, 1.383577518672690e+02,
                                   -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                   -1.556989798598866e+02, 6.680131188771972e+01,
                                   -1.328068155288572e+01};
    static constexpr double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                   -2.400758277161838e+00, -2.549732539343734e+00,
                                   4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                                   2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x = 0.0;
    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - p_low) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }

    // One Halley step against the exact CDF expressed via erfc.
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * 3.14159265358979323846) *
                     std::exp(x * x / 2.0);
    x = x - u / (1.0 + x * u / 2.0);
    return x;
}

WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t bits,
                               double confidence) {
    if (bits == 0 || errors > bits) {
        throw std::invalid_argument("wilson_interval: need 0 <= errors <= bits, bits > 0");
    }
    if (!(confidence > 0.0) || !(confidence < 1.0)) {
        throw std::invalid_argument("wilson_interval: confidence must lie in (0, 1)");
    }
    const double z = inverse_normal_cdf(1.0 - (1.0 - confidence) / 2.0);
    const double n = static_cast<double>(bits);
    const double phat = static_cast<double>(errors) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return WilsonInterval{std::max(0.0, center - half), std::min(1.0, center + half)};
}

}  // namespace muofdm::sim
