#pragma once

#include <cstdint>
#include <random>

namespace spns {

/// Seeded generator whose outputs are identical across standard libraries
/// (std::uniform_real_distribution is not specified bit-for-bit).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int integer(int lo, int hi_inclusive) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi_inclusive - lo + 1));
  }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace spns
