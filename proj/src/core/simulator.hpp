// Monte Carlo link-level simulator: spreads random bits with per-user
// chaotic sequences, superposes users on shared data sub-carriers, averages
// each user's private reference sub-carriers, and detects bits with the
// sign of the reference correlator.  Serves as the ground-truth oracle for
// the closed-form BER expressions.
#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "core/chaos.hpp"
#include "core/model.hpp"

namespace muofdm::sim {

// Clean (noise-free) multi-user frame.
//
// Every user spreads one bit per data sub-carrier over beta chips of its own
// chaotic sequence; the m-n data sub-carriers are shared by all users while
// the n reference sub-carriers are private per user.  Chip sequences are
// normalized so that sum_k x_k^2 = (m-n)*eb / ((m-n)*a + n*b), which makes
// the transmitted energy per frame equal to (m-n)*eb.
struct Frame {
    int users = 0;           // p
    int data_carriers = 0;   // m - n
    int spread_factor = 0;   // beta
    // bits[i * users + u] in {-1, +1}: bit of user u on data sub-carrier i.
    std::vector<int> bits;
    // chips[u * spread_factor + k]: user u's normalized chaotic chips.
    std::vector<double> chips;
    // data[i * spread_factor + k] = sqrt(a) * sum_u bits[i,u] * chips[u,k].
    std::vector<double> data;
};

// Channel output the detector sees.
struct FrameObservation {
    int users = 0;
    int data_carriers = 0;
    int spread_factor = 0;
    // data[i * spread_factor + k]: noisy shared data sub-carrier samples.
    std::vector<std::complex<double>> data;
    // ref_avg[u * spread_factor + k]: user u's reference copies averaged
    // after the channel, i.e. sqrt(b) * chips[u,k] + mean of n noise draws.
    std::vector<std::complex<double>> ref_avg;
};

// Correlator outputs and the bit decisions they imply.
struct DetectionResult {
    // One entry per (data sub-carrier, user) pair, laid out like Frame::bits.
    std::vector<double> metrics;
    std::vector<int> bits;  // sign of the metric; ties resolve to +1
};

// Confidence interval for an error ratio.
struct WilsonInterval {
    double low = 0.0;
    double high = 0.0;
};

struct UserTally {
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
};

struct BerEstimate {
    std::uint64_t bits = 0;
    std::uint64_t errors = 0;
    double ber = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    std::vector<UserTally> per_user;
};

struct SimOptions {
    chaos::MapKind map = chaos::MapKind::Chebyshev2;
    std::uint64_t seed = 1;
    std::uint64_t frames = 1000;
    // First frame index; frames [first_frame, first_frame + frames) are
    // simulated, so split runs can be merged into one longer run.
    std::uint64_t first_frame = 0;
    // Worker threads; 0 picks the hardware concurrency.  Results depend only
    // on (seed, first_frame, frames), never on the shard count.
    int shards = 1;
    double confidence = 0.99;
};

// Builds one clean frame.  Bits and chip sequences are derived from
// frame_seed alone, so equal seeds reproduce equal frames.
// Throws std::invalid_argument for invalid params/alloc.
Frame transmit_frame(const SystemParams& params, const Allocation& alloc,
                     chaos::MapKind map, std::uint64_t frame_seed);

// Passes a frame through the AWGN channel: every data sample and every
// reference copy receives independent complex noise with variance n0
// (n0/2 per real dimension); the n reference copies of each user are then
// averaged.  n0 = 0 yields a noiseless observation.
FrameObservation observe(const Frame& frame, const SystemParams& params,
                         const Allocation& alloc, std::uint64_t noise_seed,
                         double n0);

// D[i,u] = Re{ sum_k data[i,k] * conj(ref_avg[u,k]) }; bit = sign(D),
// with sign(0) = +1.
DetectionResult detect(const FrameObservation& observation);

// Runs `frames` independent frames and tallies detection errors over all
// (data sub-carrier, user) pairs.  The confidence interval is a Wilson
// interval on the pooled error count.
BerEstimate estimate_ber(const SystemParams& params, const Allocation& alloc,
                         const SimOptions& options);

// Measures the per-real-dimension variance of (averaged reference minus the
// clean reference) over `frames` frames; the averaging block should push it
// down to n0 / (2 * n).
double reference_noise_probe(const SystemParams& params, const Allocation& alloc,
                             std::uint64_t seed, std::uint64_t frames);

// Quantile function of the standard normal distribution (Acklam's rational
// approximation with one Halley refinement); p in (0, 1).
double inverse_normal_cdf(double p);

// Wilson score interval for `errors` failures in `bits` trials.
WilsonInterval wilson_interval(std::uint64_t errors, std::uint64_t bits,
                               double confidence);

}  // namespace muofdm::sim
