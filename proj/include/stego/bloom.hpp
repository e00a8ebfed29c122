#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "stego/common.hpp"
#include "stego/rng.hpp"

namespace stego {

// Fixed-size Bloom filter over documents, double hashing derived from
// splitmix64. False negatives are impossible; the false-positive rate
// follows the standard estimate for (bits, hashes, inserted).
class BloomFilter {
 public:
  BloomFilter(std::size_t bits, unsigned hashes)
      : bits_(bits), hashes_(hashes), words_((bits + 63) / 64, 0) {
    if (bits == 0) throw InvalidArgument("bloom filter needs at least one bit");
    if (hashes == 0) throw InvalidArgument("bloom filter needs at least one hash");
  }

  // Sizing for n expected entries at a bits-per-entry budget; the hash count
  // is the standard optimum round(bpe * ln 2), at least 1.
  static BloomFilter with_bits_per_entry(std::uint64_t n, double bits_per_entry) {
    if (n == 0 || bits_per_entry <= 0)
      throw InvalidArgument("bloom sizing needs positive entries and budget");
    auto bits = static_cast<std::size_t>(
        std::ceil(static_cast<double>(n) * bits_per_entry));
    auto hashes = static_cast<unsigned>(
        std::max(1.0, std::round(bits_per_entry * std::log(2.0))));
    return BloomFilter(bits, hashes);
  }

  void insert(DocumentId s) {
    std::uint64_t h1 = splitmix64(s);
    std::uint64_t h2 = splitmix64(h1) | 1;
    for (unsigned i = 0; i < hashes_; ++i) {
      std::uint64_t bit = (h1 + i * h2) % bits_;
      words_[bit / 64] |= 1ull << (bit % 64);
    }
    ++inserted_;
  }

  bool maybe_contains(DocumentId s) const {
    std::uint64_t h1 = splitmix64(s);
    std::uint64_t h2 = splitmix64(h1) | 1;
    for (unsigned i = 0; i < hashes_; ++i) {
      std::uint64_t bit = (h1 + i * h2) % bits_;
      if (!(words_[bit / 64] >> (bit % 64) & 1ull)) return false;
    }
    return true;
  }

  void clear() {
    std::fill(words_.begin(), words_.end(), 0);
    inserted_ = 0;
  }

  std::size_t bit_count() const { return bits_; }
  unsigned hash_count() const { return hashes_; }
  std::uint64_t inserted() const { return inserted_; }

  // Standard false-positive estimate (1 - e^{-jn/m})^j at current load.
  double false_positive_estimate() const {
    double m = static_cast<double>(bits_);
    double jn = static_cast<double>(hashes_) * static_cast<double>(inserted_);
    return std::pow(1.0 - std::exp(-jn / m), static_cast<double>(hashes_));
  }

 private:
  std::size_t bits_;
  unsigned hashes_;
  std::vector<std::uint64_t> words_;
  std::uint64_t inserted_ = 0;
};

}  // namespace stego
