// Deterministic seeding helpers and a pinned normal-variate generator.
//
// splitmix64 is used both as a seed mixer (decorrelating counter-derived
// seeds) and as the uniform source behind the Box-Muller transform.  The
// normal generator is hand-rolled instead of std::normal_distribution so
// that a given seed produces the same stream on every standard library.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace muofdm::rng {

struct SplitMix64 {
    std::uint64_t state;

    explicit SplitMix64(std::uint64_t seed) : state(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in (0, 1]: never returns 0 so log() below is safe.
    double uniform_pos() {
        return (static_cast<double>(next() >> 11) + 1.0) * 0x1p-53;
    }

    // Uniform in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1p-53;
    }
};

// Mixes a stream index into a base seed; distinct (seed, index) pairs give
// decorrelated sub-seeds.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
    SplitMix64 s(seed ^ (0x9E3779B97F4A7C15ULL * (index + 1)));
    return s.next();
}

// Standard normal variates via Box-Muller; generates pairs, caches the spare.
class NormalSource {
  public:
    explicit NormalSource(std::uint64_t seed) : uni_(seed) {}

    double next() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = uni_.uniform_pos();
        const double u2 = uni_.uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle);
    }

  private:
    SplitMix64 uni_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace muofdm::rng
