#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "stego/common.hpp"

namespace stego {

// Hiddentext symbol block paired with its width, the unit the repetition
// code operates on.
struct SymbolBlock {
  std::vector<std::uint32_t> symbols;
  unsigned w = 1;
};

inline void validate_block(const SymbolBlock& block) {
  if (block.w < 1 || block.w > 32)
    throw InvalidArgument("symbol width must be in [1,32]");
  std::uint64_t lim = 1ull << block.w;
  for (auto s : block.symbols)
    if (s >= lim) throw InvalidArgument("symbol out of range for width");
}

// r-fold repetition, r odd so plurality decoding cannot tie at full strength.
inline SymbolBlock rep_encode(const SymbolBlock& block, unsigned r) {
  validate_block(block);
  if (r < 1 || r % 2 == 0) throw InvalidArgument("repetition factor must be odd");
  SymbolBlock out;
  out.w = block.w;
  out.symbols.reserve(block.symbols.size() * r);
  for (auto s : block.symbols)
    for (unsigned i = 0; i < r; ++i) out.symbols.push_back(s);
  return out;
}

// Plurality decode per group of r; among tied counts the smallest symbol
// value wins, making the decoder deterministic.
inline SymbolBlock rep_decode(const SymbolBlock& block, unsigned r) {
  validate_block(block);
  if (r < 1 || r % 2 == 0) throw InvalidArgument("repetition factor must be odd");
  if (block.symbols.size() % r != 0)
    throw InvalidArgument("block length not a multiple of repetition factor");
  SymbolBlock out;
  out.w = block.w;
  out.symbols.reserve(block.symbols.size() / r);
  for (std::size_t g = 0; g < block.symbols.size(); g += r) {
    std::uint32_t best = 0;
    unsigned best_count = 0;
    for (unsigned i = 0; i < r; ++i) {
      std::uint32_t cand = block.symbols[g + i];
      unsigned count = 0;
      for (unsigned j = 0; j < r; ++j)
        if (block.symbols[g + j] == cand) ++count;
      if (count > best_count || (count == best_count && cand < best)) {
        best = cand;
        best_count = count;
      }
    }
    out.symbols.push_back(best);
  }
  return out;
}

// Capacity of the induced 2^w-ary symmetric hiddentext channel at symbol
// error probability pe = 2^{-h}(2^w - 1), in bits per document, with the
// closed-form lower bound w - (h+2) 2^{-h+w}. The exact expression only
// models a channel when pe <= 1/2; assumption_ok reports that.
struct CapacityBound {
  double exact = 0;
  double lower_bound = 0;
  double symbol_error_prob = 0;
  bool assumption_ok = true;
};

inline CapacityBound stf_capacity_bound(unsigned w, unsigned h) {
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  if (h < 1 || h > 64) throw InvalidArgument("entropy parameter must be in [1,64]");
  CapacityBound out;
  double p = std::ldexp(1.0, -static_cast<int>(h));
  double cells = std::ldexp(1.0, static_cast<int>(w)) - 1.0;
  double pe = p * cells;
  out.symbol_error_prob = pe;
  out.assumption_ok = pe <= 0.5;
  double correct = 1.0 - pe;
  double correct_term = correct > 0 ? correct * std::log2(correct) : 0.0;
  out.exact = static_cast<double>(w) + cells * p * (-static_cast<double>(h)) +
              correct_term;
  out.lower_bound = static_cast<double>(w) -
                    (static_cast<double>(h) + 2.0) *
                        std::ldexp(1.0, static_cast<int>(w) - static_cast<int>(h));
  return out;
}

}  // namespace stego
