// System-level parameter types and their validity rules.
#pragma once

#include <optional>
#include <string>
#include <vector>

namespace muofdm {

// Static description of one multi-user OFDM-DCSK link.
//   m    : number of shared data sub-carriers (>= 2)
//   beta : chaotic spreading factor, chips per sub-carrier (>= 1)
//   p    : number of simultaneous users (>= 1)
//   n0   : one-sided noise power spectral density (> 0)
//   eb   : per-bit energy (> 0)
struct SystemParams {
    int m = 64;
    int beta = 128;
    int p = 1;
    double n0 = 1.0;
    double eb = 10.0;
};

// A joint sub-carrier / power split:
//   n : reference sub-carriers per user, valid range [1, m-1]
//   a : power assigned to each data sub-carrier (> 0)
//   b : power assigned to each reference sub-carrier (> 0)
struct Allocation {
    int n = 1;
    double a = 1.0;
    double b = 1.0;
};

// Total allocated power: (m - n) * a + n * b.
double power_sum(const SystemParams& params, const Allocation& alloc);

// Converts an Eb/N0 value in dB to the linear per-bit energy for the given
// noise density: eb = n0 * 10^(db/10).  Throws std::invalid_argument on
// non-finite input or non-positive n0.
double ebn0_db_to_linear(double ebn0_db, double n0);

// Collects every rule violation as a human-readable message.  An empty
// result means the configuration is usable.  Violations are data, not
// faults: no exception is thrown for a bad configuration.  When `budget`
// is set, power_sum must not exceed it.
std::vector<std::string> validate(const SystemParams& params,
                                  const Allocation& alloc,
                                  std::optional<double> budget = std::nullopt);

// Validity of the static parameters alone (no allocation involved).
std::vector<std::string> validate(const SystemParams& params);

}  // namespace muofdm
