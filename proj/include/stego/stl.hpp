#pragma once

#include <cstdint>
#include <vector>

#include "stego/channel.hpp"
#include "stego/common.hpp"
#include "stego/prf.hpp"
#include "stego/rng.hpp"

namespace stego {

// Stateless bounded rejection-sampler stegosystem. Each hiddentext symbol
// takes at most k channel draws; the first draw the symbol function maps to
// the symbol is emitted, and if none of the k draws qualifies the k-th draw
// is emitted anyway. Encoding never aborts; decoding any symbol needs only
// that symbol's document.
struct StlConfig {
  unsigned w = 1;        // hiddentext symbol width in bits, 1..32
  std::uint64_t k = 1;   // per-symbol draw budget, at least 1
  unsigned kappa = 128;  // nominal security parameter, informational
};

// Encodes one symbol at channel index idx. With k = 1 this is a bare channel
// draw. The symbol function carries no counter; slice 0 is used throughout.
inline DocumentId stl_encode_one(SymbolFunction& f, std::uint32_t m,
                                 std::uint64_t k, std::uint32_t idx,
                                 const ChannelModel& chan, RandomSource& rng,
                                 std::uint64_t* samples_out = nullptr) {
  if (k < 1) throw InvalidArgument("draw budget must be at least 1");
  DocumentId s = 0;
  std::uint64_t j = 0;
  for (; j < k; ++j) {
    s = chan.sample_at_index(idx, rng);
    if (f.eval(0, s) == m) {
      ++j;
      break;
    }
  }
  if (samples_out) *samples_out = j;
  return s;
}

inline std::vector<DocumentId> stl_encode_symbols(
    SymbolFunction& f, const std::vector<std::uint32_t>& symbols,
    const History& history, std::uint64_t k, const ChannelModel& chan,
    RandomSource& rng, std::vector<std::uint64_t>* per_symbol_samples = nullptr) {
  detail::check_symbol_range(symbols, f.width());
  chan.validate_history(history);
  std::vector<DocumentId> out;
  out.reserve(symbols.size());
  std::uint32_t idx = static_cast<std::uint32_t>(history.size());
  for (auto m : symbols) {
    ++idx;
    std::uint64_t samples = 0;
    out.push_back(stl_encode_one(f, m, k, idx, chan, rng,
                                 per_symbol_samples ? &samples : nullptr));
    if (per_symbol_samples) per_symbol_samples->push_back(samples);
  }
  return out;
}

inline std::vector<std::uint32_t> stl_decode_symbols(
    SymbolFunction& f, const std::vector<DocumentId>& stegotext) {
  std::vector<std::uint32_t> out;
  out.reserve(stegotext.size());
  for (auto s : stegotext) out.push_back(f.eval(0, s));
  return out;
}

inline std::vector<DocumentId> stl_encode(const StegoKey& key,
                                          const StlConfig& cfg,
                                          const BitString& m,
                                          const History& history,
                                          const ChannelModel& chan,
                                          RandomSource& rng) {
  KeyedSymbolFunction f(key, PrfDomain::stl, cfg.w);
  auto symbols = bits_to_symbols(m, cfg.w);
  return stl_encode_symbols(f, symbols, history, cfg.k, chan, rng);
}

inline BitString stl_decode(const StegoKey& key, const StlConfig& cfg,
                            const std::vector<DocumentId>& stegotext) {
  KeyedSymbolFunction f(key, PrfDomain::stl, cfg.w);
  return symbols_to_bits(stl_decode_symbols(f, stegotext), cfg.w);
}

}  // namespace stego
