#pragma once

#include <cstdint>
#include <random>

#include "stego/common.hpp"

namespace stego {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Seedable deterministic generator backing every Monte-Carlo run. mt19937_64
// is fully specified by the standard, so identical seeds reproduce identical
// streams across platforms and toolchains. Single-owner mutable: parallel
// trials take independent instances via spawn().
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed = 0) : engine_(seed), seed_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, n). Rejection keeps it exactly unbiased; std::uniform_int_distribution
  // is implementation-defined and would break cross-platform reproducibility.
  std::uint64_t uniform_below(std::uint64_t n) {
    if (n == 0) throw InvalidArgument("uniform_below(0)");
    if ((n & (n - 1)) == 0) return next_u64() & (n - 1);
    const std::uint64_t threshold = -n % n;  // 2^64 mod n
    for (;;) {
      std::uint64_t x = next_u64();
      if (x >= threshold) return x % n;
    }
  }

  // Uniform w-bit value, 1 <= w <= 64.
  std::uint64_t bits(unsigned w) {
    if (w < 1 || w > 64) throw InvalidArgument("bits width must be in [1,64]");
    return w == 64 ? next_u64() : next_u64() & ((1ull << w) - 1);
  }

  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Child generator for trial `stream`: deterministic in (seed, stream) and
  // independent-looking across streams, so threaded runs aggregate the same
  // results in any execution order.
  RandomSource spawn(std::uint64_t stream) const {
    return RandomSource(splitmix64(seed_ ^ splitmix64(stream + 0x51ED2701)));
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace stego
