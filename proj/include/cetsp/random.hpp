#pragma once

#include <cstdint>
#include <random>

namespace cetsp {

// Seeded random source with portable output. mt19937_64 is specified
// bit-exactly by the standard; the uniform mappings below avoid
// std::uniform_real_distribution, whose output is implementation-defined,
// so identical seeds give identical streams on every platform.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t bits() { return engine_(); }

  // Uniform in [0, 1) with 53 random mantissa bits.
  double canonical() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * canonical(); }

  // Uniform index in [0, n). n = 0 returns 0.
  std::size_t index(std::size_t n) {
    if (n == 0) return 0;
    using u128 = unsigned __int128;
    return static_cast<std::size_t>(
        (static_cast<u128>(engine_()) * static_cast<u128>(n)) >> 64);
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace cetsp
