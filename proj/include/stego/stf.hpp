#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <unordered_set>
#include <vector>

#include "stego/bloom.hpp"
#include "stego/channel.hpp"
#include "stego/common.hpp"
#include "stego/prf.hpp"
#include "stego/rng.hpp"

namespace stego {

// Stateful rejection-sampler stegosystem. Shared state is a 64-bit counter;
// each hiddentext symbol advances it by one and keys an independent slice of
// the symbol function. Intended operating regime is w below the channel
// min-entropy; callers surface a warning otherwise.
struct StfConfig {
  unsigned w = 1;       // hiddentext symbol width in bits, 1..32
  unsigned kappa = 128; // nominal security parameter, informational
};

struct StfState {
  std::uint64_t ctr = 0;
};

// Encodes one hiddentext symbol starting at channel index idx with counter
// slice ctr. Repeated draws of a document already seen in this symbol's loop
// are accepted on a fresh uniform w-bit coin instead of the symbol function,
// keeping per-draw acceptance exactly 2^-w. Returns the accepted document.
inline DocumentId stf_encode_one(SymbolFunction& f, std::uint32_t m,
                                 std::uint64_t ctr, std::uint32_t idx,
                                 const ChannelModel& chan, RandomSource& rng,
                                 std::uint64_t* samples_out = nullptr) {
  unsigned w = f.width();
  std::unordered_set<DocumentId> seen;
  std::uint64_t samples = 0;
  for (;;) {
    DocumentId s = chan.sample_at_index(idx, rng);
    ++samples;
    bool accept;
    if (seen.count(s)) {
      accept = rng.bits(w) == m;
    } else {
      accept = f.eval(ctr, s) == m;
      seen.insert(s);
    }
    if (accept) {
      if (samples_out) *samples_out = samples;
      return s;
    }
  }
}

inline std::vector<DocumentId> stf_encode_symbols(
    SymbolFunction& f, const std::vector<std::uint32_t>& symbols,
    const History& history, StfState& state, const ChannelModel& chan,
    RandomSource& rng, std::vector<std::uint64_t>* per_symbol_samples = nullptr) {
  detail::check_symbol_range(symbols, f.width());
  std::uint64_t l = symbols.size();
  if (l > std::numeric_limits<std::uint64_t>::max() - state.ctr)
    throw LimitExceeded("shared counter would overflow");
  chan.validate_history(history);
  std::vector<DocumentId> out;
  out.reserve(symbols.size());
  std::uint32_t idx = static_cast<std::uint32_t>(history.size());
  for (auto m : symbols) {
    ++state.ctr;
    ++idx;
    std::uint64_t samples = 0;
    out.push_back(stf_encode_one(f, m, state.ctr, idx, chan, rng,
                                 per_symbol_samples ? &samples : nullptr));
    if (per_symbol_samples) per_symbol_samples->push_back(samples);
  }
  return out;
}

inline std::vector<std::uint32_t> stf_decode_symbols(
    SymbolFunction& f, const std::vector<DocumentId>& stegotext,
    StfState& state) {
  std::uint64_t l = stegotext.size();
  if (l > std::numeric_limits<std::uint64_t>::max() - state.ctr)
    throw LimitExceeded("shared counter would overflow");
  std::vector<std::uint32_t> out;
  out.reserve(stegotext.size());
  for (auto s : stegotext) {
    ++state.ctr;
    out.push_back(f.eval(state.ctr, s));
  }
  return out;
}

// Keyed wrappers. The hiddentext bit string is zero-padded to a whole number
// of w-bit symbols; decode returns all |stegotext|*w bits and leaves trimming
// to the caller's framing.
inline std::vector<DocumentId> stf_encode(const StegoKey& key,
                                          const StfConfig& cfg,
                                          const BitString& m,
                                          const History& history,
                                          StfState& state,
                                          const ChannelModel& chan,
                                          RandomSource& rng) {
  KeyedSymbolFunction f(key, PrfDomain::stf, cfg.w);
  auto symbols = bits_to_symbols(m, cfg.w);
  return stf_encode_symbols(f, symbols, history, state, chan, rng);
}

inline BitString stf_decode(const StegoKey& key, const StfConfig& cfg,
                            const std::vector<DocumentId>& stegotext,
                            StfState& state) {
  KeyedSymbolFunction f(key, PrfDomain::stf, cfg.w);
  return symbols_to_bits(stf_decode_symbols(f, stegotext, state), cfg.w);
}

// Private sample log for the stateless variant: either an exact set of every
// document drawn so far, or a Bloom filter of them. Bloom false positives
// only divert fresh draws to the coin path, so correctness degrades but never
// the stegotext's channel conformance.
class PrivateSampleLog {
 public:
  static PrivateSampleLog exact() { return PrivateSampleLog(); }

  static PrivateSampleLog bloom(std::size_t bits, unsigned hashes) {
    PrivateSampleLog log;
    log.bloom_.emplace(bits, hashes);
    return log;
  }

  static PrivateSampleLog bloom_for_entries(std::uint64_t n,
                                            double bits_per_entry) {
    PrivateSampleLog log;
    log.bloom_.emplace(BloomFilter::with_bits_per_entry(n, bits_per_entry));
    return log;
  }

  bool contains(DocumentId s) const {
    return bloom_ ? bloom_->maybe_contains(s) : set_.count(s) != 0;
  }

  void insert(DocumentId s) {
    if (bloom_)
      bloom_->insert(s);
    else
      set_.insert(s);
  }

  void clear() {
    if (bloom_)
      bloom_->clear();
    else
      set_.clear();
  }

  bool is_bloom() const { return bloom_.has_value(); }

  std::uint64_t inserted() const {
    return bloom_ ? bloom_->inserted() : set_.size();
  }

 private:
  PrivateSampleLog() = default;
  std::unordered_set<DocumentId> set_;
  std::optional<BloomFilter> bloom_;
};

// Stateless variant: no shared counter (the symbol function is always
// evaluated on counter slice 0) and the repeat test consults the encoder's
// private log of every document drawn so far instead of a per-symbol set.
// Every draw is logged, accepted or not.
inline std::vector<DocumentId> stf_encode_stateless_symbols(
    SymbolFunction& f, const std::vector<std::uint32_t>& symbols,
    const History& history, const ChannelModel& chan, RandomSource& rng,
    PrivateSampleLog& log, std::vector<std::uint64_t>* per_symbol_samples = nullptr) {
  detail::check_symbol_range(symbols, f.width());
  chan.validate_history(history);
  unsigned w = f.width();
  std::vector<DocumentId> out;
  out.reserve(symbols.size());
  std::uint32_t idx = static_cast<std::uint32_t>(history.size());
  for (auto m : symbols) {
    ++idx;
    std::uint64_t samples = 0;
    for (;;) {
      DocumentId s = chan.sample_at_index(idx, rng);
      ++samples;
      bool repeat = log.contains(s);
      log.insert(s);
      bool accept = repeat ? rng.bits(w) == m : f.eval(0, s) == m;
      if (accept) {
        out.push_back(s);
        break;
      }
    }
    if (per_symbol_samples) per_symbol_samples->push_back(samples);
  }
  return out;
}

inline std::vector<std::uint32_t> stf_decode_stateless_symbols(
    SymbolFunction& f, const std::vector<DocumentId>& stegotext) {
  std::vector<std::uint32_t> out;
  out.reserve(stegotext.size());
  for (auto s : stegotext) out.push_back(f.eval(0, s));
  return out;
}

inline std::vector<DocumentId> stf_encode_stateless(
    const StegoKey& key, const StfConfig& cfg, const BitString& m,
    const History& history, const ChannelModel& chan, RandomSource& rng,
    PrivateSampleLog& log) {
  KeyedSymbolFunction f(key, PrfDomain::stf, cfg.w);
  auto symbols = bits_to_symbols(m, cfg.w);
  return stf_encode_stateless_symbols(f, symbols, history, chan, rng, log);
}

inline BitString stf_decode_stateless(const StegoKey& key,
                                      const StfConfig& cfg,
                                      const std::vector<DocumentId>& stegotext) {
  KeyedSymbolFunction f(key, PrfDomain::stf, cfg.w);
  return symbols_to_bits(stf_decode_stateless_symbols(f, stegotext), cfg.w);
}

}  // namespace stego
