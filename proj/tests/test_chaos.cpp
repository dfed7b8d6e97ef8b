#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <numeric>

#include "core/chaos.hpp"
#include "doctest.h"

using muofdm::chaos::ChaoticSequence;
using muofdm::chaos::MapKind;

namespace {

double sum(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0);
}

double energy(const std::vector<double>& v) {
    return std::inner_product(v.begin(), v.end(), v.begin(), 0.0);
}

}  // namespace

TEST_CASE("map steps follow their recurrences") {
    CHECK(muofdm::chaos::chebyshev2_step(0.5) == doctest::Approx(1.0 - 2.0 * 0.25));
    CHECK(muofdm::chaos::chebyshev2_step(-0.3) ==
          doctest::Approx(1.0 - 2.0 * 0.09));
    // 1 - 2cos^2(theta) = -cos(2 theta): the step is the negated
    // double-angle map, sharing the arcsine invariant density
    const double theta = 1.234;
    CHECK(muofdm::chaos::chebyshev2_step(std::cos(theta)) ==
          doctest::Approx(-std::cos(2.0 * theta)));

    CHECK(muofdm::chaos::logistic_step(0.25, 4.0) ==
          doctest::Approx(4.0 * 0.25 * 0.75));
    CHECK(muofdm::chaos::logistic_step(0.5) ==
          doctest::Approx(muofdm::chaos::kLogisticR * 0.25));
}

TEST_CASE("generated sequences are deterministic in the seed") {
    const ChaoticSequence s1 = muofdm::chaos::generate(MapKind::Chebyshev2, 42, 128);
    const ChaoticSequence s2 = muofdm::chaos::generate(MapKind::Chebyshev2, 42, 128);
    const ChaoticSequence s3 = muofdm::chaos::generate(MapKind::Chebyshev2, 43, 128);
    CHECK(s1.chips == s2.chips);
    CHECK(s1.chips != s3.chips);
    CHECK(static_cast<int>(s1.chips.size()) == 128);
}

TEST_CASE("generated sequences have zero sample mean") {
    for (const MapKind kind : {MapKind::Chebyshev2, MapKind::Logistic}) {
        for (std::uint64_t seed : {1ull, 7ull, 99ull}) {
            const ChaoticSequence seq = muofdm::chaos::generate(kind, seed, 256);
            CHECK(std::abs(sum(seq.chips)) < 1e-10 * 256);
        }
    }
}

TEST_CASE("sequence energy field tracks the chips") {
    const ChaoticSequence seq = muofdm::chaos::generate(MapKind::Logistic, 5, 200);
    CHECK(seq.energy == doctest::Approx(energy(seq.chips)).epsilon(1e-12));
    CHECK(seq.energy > 0.0);
}

TEST_CASE("energy normalization rescales to the requested target") {
    const ChaoticSequence raw = muofdm::chaos::generate(MapKind::Chebyshev2, 11, 128);
    const double target = 3.75;
    const ChaoticSequence scaled = muofdm::chaos::normalize_energy(raw, target);
    CHECK(scaled.energy == doctest::Approx(target).epsilon(1e-12));
    CHECK(energy(scaled.chips) == doctest::Approx(target).epsilon(1e-12));
    // direction preserved: scaled = gain * raw elementwise
    const double gain = std::sqrt(target / raw.energy);
    for (std::size_t i = 0; i < raw.chips.size(); ++i) {
        CHECK(scaled.chips[i] == doctest::Approx(gain * raw.chips[i]).epsilon(1e-12));
    }
}

// Distinct users separate because distinct chip sequences decorrelate: over
// many random pairs the normalized cross-correlation should almost always be
// small compared to the autocorrelation peak of 1.
TEST_CASE("cross-correlation between distinct sequences stays low") {
    const int length = 128;
    const int pairs = 10000;
    int low = 0;
    for (int i = 0; i < pairs; ++i) {
        const ChaoticSequence x = muofdm::chaos::generate(
            MapKind::Chebyshev2, 1000 + 2 * static_cast<std::uint64_t>(i), length);
        const ChaoticSequence y = muofdm::chaos::generate(
            MapKind::Chebyshev2, 1001 + 2 * static_cast<std::uint64_t>(i), length);
        const double dot =
            std::inner_product(x.chips.begin(), x.chips.end(), y.chips.begin(), 0.0);
        const double rho = dot / std::sqrt(x.energy * y.energy);
        CHECK(std::abs(rho) < 1.0);  // never as aligned as a self-pair
        if (std::abs(rho) < 0.3) ++low;
    }
    CHECK(low >= pairs * 99 / 100);
}

TEST_CASE("chebyshev chips stay inside the map's invariant interval") {
    const ChaoticSequence seq = muofdm::chaos::generate(MapKind::Chebyshev2, 3, 512);
    // mean removal can push samples slightly past [-1, 1]
    for (const double c : seq.chips) {
        CHECK(std::abs(c) < 2.0);
    }
}
