#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace kfvp {

/// Portable random source: the raw 64-bit mt19937_64 stream (fully specified by
/// the C++ standard) mapped to doubles by hand, so a seed yields the same
/// numbers on every conforming platform. The <random> distributions are not
/// used because their algorithms are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform on [-1, 1).
  double symmetric() { return 2.0 * uniform() - 1.0; }

  /// Standard normal via Box-Muller.
  double normal() {
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace kfvp
