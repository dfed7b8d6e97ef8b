#include "core/chaos.hpp"

#include <cmath>
#include <stdexcept>

#include "core/rng.hpp"

namespace muofdm::chaos {

double chebyshev2_step(double x) { return 1.0 - 2.0 * x * x; }

double logistic_step(double x, double r) { return r * x * (1.0 - x); }

namespace {

double initial_state(MapKind kind, std::uint64_t seed) {
    rng::SplitMix64 s(rng::mix_seed(seed, 0x43484153ULL));  // "CHAS"
    const double u = s.uniform();
    switch (kind) {
        case MapKind::Chebyshev2:
            // Interior of (-1, 1), away from the endpoints.
            return -0.95 + 1.90 * u;
        case MapKind::Logistic:
            // Interior of (0, 1), away from the endpoints.
            return 0.05 + 0.90 * u;
    }
    throw std::invalid_argument("generate: unknown map kind");
}

double step(MapKind kind, double x) {
    return kind == MapKind::Chebyshev2 ? chebyshev2_step(x) : logistic_step(x);
}

}  // namespace

ChaoticSequence generate(MapKind kind, std::uint64_t seed, int length, int burn_in) {
    if (length < 1) throw std::invalid_argument("generate: length must be >= 1");
    if (burn_in < 0) throw std::invalid_argument("generate: burn_in must be >= 0");

    constexpr int kMaxRetries = 8;
    for (int attempt = 0; attempt <= kMaxRetries; ++attempt) {
        double x = initial_state(kind, seed + static_cast<std::uint64_t>(attempt));
        for (int i = 0; i < burn_in; ++i) x = step(kind, x);

        ChaoticSequence seq;
        seq.chips.resize(static_cast<std::size_t>(length));
        double sum = 0.0;
        bool finite = true;
        for (int i = 0; i < length; ++i) {
            seq.chips[static_cast<std::size_t>(i)] = x;
            sum += x;
            if (!std::isfinite(x)) finite = false;
            x = step(kind, x);
        }
        if (!finite) continue;  // escaped the map's domain; reseed

        const double mean = sum / static_cast<double>(length);
        double energy = 0.0;
        for (double& c : seq.chips) {
            c -= mean;
            energy += c * c;
        }
        seq.energy = energy;

        // A fixed point (e.g. x=0 -> 1 -> -1 -> -1 -> ... for Chebyshev)
        // yields an all-equal tail that mean removal wipes out entirely.
        if (energy > 1e-12 * static_cast<double>(length)) return seq;
    }
    throw std::domain_error("generate: degenerate chaotic orbit after 8 reseeds");
}

ChaoticSequence normalize_energy(const ChaoticSequence& seq, double target_energy) {
    if (!std::isfinite(target_energy) || target_energy <= 0.0) {
        throw std::invalid_argument("normalize_energy: target must be finite and > 0");
    }
    if (seq.energy <= 0.0) {
        throw std::invalid_argument("normalize_energy: sequence has no energy");
    }
    const double scale = std::sqrt(target_energy / seq.energy);
    ChaoticSequence out;
    out.chips.reserve(seq.chips.size());
    double energy = 0.0;
    for (double c : seq.chips) {
        const double v = c * scale;
        out.chips.push_back(v);
        energy += v * v;
    }
    out.energy = energy;
    return out;
}

}  // namespace muofdm::chaos
