// Chaotic spreading-sequence generation.
#pragma once

#include <cstdint>
#include <vector>

namespace muofdm::chaos {

enum class MapKind {
    Chebyshev2,  // x[k+1] = 1 - 2*x[k]^2 on (-1, 1); zero-mean invariant density
    Logistic,    // x[k+1] = r*x[k]*(1 - x[k]) on (0, 1) with r = 3.9999
};

inline constexpr double kLogisticR = 3.9999;

// One iteration of each map, exposed for direct testing.
double chebyshev2_step(double x);
double logistic_step(double x, double r = kLogisticR);

struct ChaoticSequence {
    std::vector<double> chips;
    double energy = 0.0;  // sum of squared chips, kept in sync with `chips`
};

// Generates `length` chips: the initial state is derived from `seed`, the
// map is burnt in for `burn_in` iterations, and the sample mean of the kept
// chips is subtracted (the logistic map is not zero-mean).  A degenerate
// orbit (all chips equal after mean removal, e.g. a fixed point of the map)
// triggers a reseed with seed+1, up to 8 retries, after which
// std::domain_error is thrown.
ChaoticSequence generate(MapKind kind, std::uint64_t seed, int length,
                         int burn_in = 1024);

// Returns a copy scaled so that the summed squared chips equal
// `target_energy`.  Throws std::invalid_argument for a non-positive target
// or a zero-energy input.
ChaoticSequence normalize_energy(const ChaoticSequence& seq, double target_energy);

}  // namespace muofdm::chaos
