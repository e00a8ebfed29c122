#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace stego {

// A document is a dense integer in [0, S) for the owning alphabet.
using DocumentId = std::uint32_t;

// Sequence of documents sent so far. Legality (each prefix symbol has
// nonzero probability under the channel) is the owner's invariant; channels
// re-check what is cheap at their sampling entry points.
using History = std::vector<DocumentId>;

class StegoError : public std::runtime_error {
 public:
  explicit StegoError(const std::string& what) : std::runtime_error(what) {}
};

// Bad parameters, malformed queries, out-of-range symbols.
class InvalidArgument : public StegoError {
 public:
  explicit InvalidArgument(const std::string& what) : StegoError(what) {}
};

// Violated runtime limits: counter overflow, memory caps, enumeration caps.
class LimitExceeded : public StegoError {
 public:
  explicit LimitExceeded(const std::string& what) : StegoError(what) {}
};

// Message payload as a bit string. Bit i lives at bytes[i/8], MSB first,
// so byte streams round-trip unchanged when nbits is a multiple of 8.
struct BitString {
  std::vector<std::uint8_t> bytes;
  std::size_t nbits = 0;

  static BitString from_bytes(std::vector<std::uint8_t> data) {
    BitString b;
    b.nbits = data.size() * 8;
    b.bytes = std::move(data);
    return b;
  }

  bool bit(std::size_t i) const {
    return (bytes[i / 8] >> (7 - i % 8)) & 1u;
  }

  void push_bit(bool v) {
    if (nbits % 8 == 0) bytes.push_back(0);
    if (v) bytes[nbits / 8] |= static_cast<std::uint8_t>(1u << (7 - nbits % 8));
    ++nbits;
  }

  bool operator==(const BitString& o) const {
    if (nbits != o.nbits) return false;
    for (std::size_t i = 0; i < nbits; ++i)
      if (bit(i) != o.bit(i)) return false;
    return true;
  }
};

// Splits a bit string into w-bit symbols, MSB first, zero-padding the tail
// so the result always covers every input bit.
inline std::vector<std::uint32_t> bits_to_symbols(const BitString& m, unsigned w) {
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  std::vector<std::uint32_t> out;
  out.reserve((m.nbits + w - 1) / w);
  std::uint32_t cur = 0;
  unsigned got = 0;
  for (std::size_t i = 0; i < m.nbits; ++i) {
    cur = (cur << 1) | (m.bit(i) ? 1u : 0u);
    if (++got == w) {
      out.push_back(cur);
      cur = 0;
      got = 0;
    }
  }
  if (got > 0) out.push_back(cur << (w - got));
  return out;
}

inline BitString symbols_to_bits(const std::vector<std::uint32_t>& syms, unsigned w) {
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  BitString out;
  for (std::uint32_t s : syms)
    for (unsigned b = 0; b < w; ++b)
      out.push_bit((s >> (w - 1 - b)) & 1u);
  return out;
}

namespace detail {

inline void check_symbol_range(const std::vector<std::uint32_t>& symbols,
                               unsigned w) {
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  std::uint64_t lim = 1ull << w;
  for (auto m : symbols)
    if (m >= lim) throw InvalidArgument("hiddentext symbol out of range for width");
}

}  // namespace detail

inline std::string to_hex(const std::vector<std::uint8_t>& data) {
  static const char* digits = "0123456789abcdef";
  std::string s;
  s.reserve(data.size() * 2);
  for (std::uint8_t b : data) {
    s.push_back(digits[b >> 4]);
    s.push_back(digits[b & 0xF]);
  }
  return s;
}

inline std::vector<std::uint8_t> from_hex(const std::string& hex) {
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
  };
  if (hex.size() % 2 != 0) throw InvalidArgument("hex string has odd length");
  std::vector<std::uint8_t> out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = nibble(hex[i]), lo = nibble(hex[i + 1]);
    if (hi < 0 || lo < 0) throw InvalidArgument("invalid hex digit");
    out.push_back(static_cast<std::uint8_t>(hi << 4 | lo));
  }
  return out;
}

}  // namespace stego
