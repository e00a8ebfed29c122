#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "stego/common.hpp"
#include "stego/rng.hpp"

namespace stego {

// Sampling oracle abstraction. Immutable after construction and safely
// shareable across threads; all mutation lives in the caller's RandomSource.
//
// Distributions are indexed by history length only (index i = |history| + 1),
// which covers every channel kind here: memoryless channels ignore i and
// flat channels depend on nothing else.
class ChannelModel {
 public:
  virtual ~ChannelModel() = default;

  virtual std::uint32_t alphabet_size() const = 0;
  virtual std::string kind() const = 0;

  // Exact min-entropy in bits over reachable histories, when computable.
  virtual std::optional<double> min_entropy_bits() const = 0;

  // One draw at history-length index i >= 1.
  virtual DocumentId sample_at_index(std::uint64_t i, RandomSource& rng) const = 0;

  // One draw following `history`. Rejects histories containing out-of-range
  // symbols; kinds that can cheaply see a zero-probability prefix symbol
  // reject those too rather than renormalize.
  DocumentId sample(const History& history, RandomSource& rng) const {
    validate_history(history);
    return sample_at_index(history.size() + 1, rng);
  }

  virtual void validate_history(const History& history) const {
    for (DocumentId d : history)
      if (d >= alphabet_size())
        throw InvalidArgument("history symbol out of range");
  }
};

// History-independent channel sampling proportionally to integer counts.
class MemorylessChannel final : public ChannelModel {
 public:
  explicit MemorylessChannel(std::vector<std::uint64_t> counts)
      : counts_(std::move(counts)) {
    if (counts_.empty()) throw InvalidArgument("empty frequency table");
    cumulative_.reserve(counts_.size());
    std::uint64_t run = 0;
    for (std::uint64_t c : counts_) {
      run += c;
      cumulative_.push_back(run);
    }
    total_ = run;
    if (total_ == 0) throw InvalidArgument("all-zero frequency table");
    max_count_ = *std::max_element(counts_.begin(), counts_.end());
  }

  static MemorylessChannel uniform(std::uint32_t S) {
    return MemorylessChannel(std::vector<std::uint64_t>(S, 1));
  }

  std::uint32_t alphabet_size() const override {
    return static_cast<std::uint32_t>(counts_.size());
  }

  std::string kind() const override { return "memoryless-empirical"; }

  std::optional<double> min_entropy_bits() const override {
    return -std::log2(static_cast<double>(max_count_) / static_cast<double>(total_));
  }

  DocumentId sample_at_index(std::uint64_t, RandomSource& rng) const override {
    std::uint64_t u = rng.uniform_below(total_);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    return static_cast<DocumentId>(it - cumulative_.begin());
  }

  // Rejects zero-probability symbols: sparse-support histories are illegal
  // here, not renormalized.
  void validate_history(const History& history) const override {
    for (DocumentId d : history) {
      if (d >= alphabet_size()) throw InvalidArgument("history symbol out of range");
      if (counts_[d] == 0) throw InvalidArgument("history symbol has zero probability");
    }
  }

  const std::vector<std::uint64_t>& counts() const { return counts_; }

 private:
  std::vector<std::uint64_t> counts_;
  std::vector<std::uint64_t> cumulative_;
  std::uint64_t total_ = 0;
  std::uint64_t max_count_ = 0;
};

// Channels whose per-index support is an enumerable set: the membership
// adversary and the support-enumeration tests run against this interface.
class SupportTestable {
 public:
  virtual ~SupportTestable() = default;
  virtual bool in_support(std::uint64_t i, DocumentId s) const = 0;
  virtual std::vector<DocumentId> enumerate_support(std::uint64_t i) const = 0;
};

// Explicitly stored flat channel: uniform on a size-H subset per index,
// subsets chosen uniformly at construction. Test oracle for the
// pseudorandom implementation.
class TrueRandomFlatChannel final : public ChannelModel, public SupportTestable {
 public:
  TrueRandomFlatChannel(std::uint32_t S, std::uint32_t H, std::uint64_t max_i,
                        RandomSource& rng)
      : S_(S), H_(H) {
    if (H == 0 || H > S) throw InvalidArgument("need 0 < H <= S");
    if (max_i == 0) throw InvalidArgument("need max_i >= 1");
    if (static_cast<std::uint64_t>(S) * max_i > (1ull << 27))
      throw LimitExceeded("explicit flat channel too large to store");
    supports_.reserve(max_i);
    std::vector<DocumentId> pool(S);
    std::iota(pool.begin(), pool.end(), 0u);
    for (std::uint64_t i = 0; i < max_i; ++i) {
      // Partial Fisher-Yates: the first H entries are a uniform H-subset.
      for (std::uint32_t j = 0; j < H; ++j) {
        std::uint64_t pick = j + rng.uniform_below(S - j);
        std::swap(pool[j], pool[pick]);
      }
      std::vector<DocumentId> sup(pool.begin(), pool.begin() + H);
      std::sort(sup.begin(), sup.end());
      supports_.push_back(std::move(sup));
    }
  }

  std::uint32_t alphabet_size() const override { return S_; }
  std::uint32_t support_size() const { return H_; }
  std::string kind() const override { return "flat-true-random"; }

  std::optional<double> min_entropy_bits() const override {
    return std::log2(static_cast<double>(H_));
  }

  DocumentId sample_at_index(std::uint64_t i, RandomSource& rng) const override {
    const auto& sup = support_at(i);
    return sup[rng.uniform_below(sup.size())];
  }

  bool in_support(std::uint64_t i, DocumentId s) const override {
    const auto& sup = support_at(i);
    return std::binary_search(sup.begin(), sup.end(), s);
  }

  std::vector<DocumentId> enumerate_support(std::uint64_t i) const override {
    return support_at(i);
  }

 private:
  const std::vector<DocumentId>& support_at(std::uint64_t i) const {
    if (i == 0) throw InvalidArgument("history-length index starts at 1");
    if (i > supports_.size())
      throw InvalidArgument("index exceeds stored distributions");
    return supports_[i - 1];
  }

  std::uint32_t S_, H_;
  std::vector<std::vector<DocumentId>> supports_;
};

// Pre-committed oracle answers: stream i holds the j-th sample at history
// length i. Reads are strictly sequential per stream; streams extend lazily
// from the generating channel and every draw stays recorded for the run.
class DrawSequence {
 public:
  DrawSequence(const ChannelModel& chan, RandomSource& rng)
      : chan_(&chan), rng_(&rng) {}

  // Replay construction: streams are fixed upfront, no generator behind them.
  explicit DrawSequence(std::vector<std::vector<DocumentId>> streams)
      : streams_(std::move(streams)) {
    cursors_.assign(streams_.size(), 0);
  }

  DocumentId next(std::uint64_t i) {
    if (i == 0) throw InvalidArgument("stream index starts at 1");
    if (i > streams_.size()) {
      streams_.resize(i);
      cursors_.resize(i, 0);
    }
    auto& stream = streams_[i - 1];
    auto& cur = cursors_[i - 1];
    if (cur == stream.size()) {
      if (!chan_) throw InvalidArgument("replay stream exhausted");
      stream.push_back(chan_->sample_at_index(i, *rng_));
    }
    return stream[cur++];
  }

  void rewind() { std::fill(cursors_.begin(), cursors_.end(), 0); }

  const std::vector<std::vector<DocumentId>>& recorded() const { return streams_; }

 private:
  const ChannelModel* chan_ = nullptr;
  RandomSource* rng_ = nullptr;
  std::vector<std::vector<DocumentId>> streams_;
  std::vector<std::size_t> cursors_;
};

// Forwarding wrapper that counts (and optionally records) every sample the
// wrapped channel answers; the instrumentation behind query-count runs and
// black-box output checks.
class CountingChannel final : public ChannelModel {
 public:
  explicit CountingChannel(const ChannelModel& inner, bool record = false)
      : inner_(&inner), record_(record) {}

  std::uint32_t alphabet_size() const override { return inner_->alphabet_size(); }
  std::string kind() const override { return inner_->kind(); }
  std::optional<double> min_entropy_bits() const override {
    return inner_->min_entropy_bits();
  }
  void validate_history(const History& h) const override {
    inner_->validate_history(h);
  }

  DocumentId sample_at_index(std::uint64_t i, RandomSource& rng) const override {
    DocumentId d = inner_->sample_at_index(i, rng);
    ++queries_;
    if (record_) {
      if (i > recorded_.size()) recorded_.resize(i);
      recorded_[i - 1].push_back(d);
    }
    return d;
  }

  std::uint64_t queries() const { return queries_; }
  void reset() {
    queries_ = 0;
    recorded_.clear();
  }
  const std::vector<std::vector<DocumentId>>& recorded() const { return recorded_; }

 private:
  const ChannelModel* inner_;
  bool record_;
  mutable std::uint64_t queries_ = 0;
  mutable std::vector<std::vector<DocumentId>> recorded_;
};

inline DocumentId sample_next(const ChannelModel& channel, const History& history,
                              RandomSource& rng) {
  return channel.sample(history, rng);
}

inline MemorylessChannel make_memoryless_empirical(std::vector<std::uint64_t> counts) {
  return MemorylessChannel(std::move(counts));
}

inline DocumentId draw_oracle_next(DrawSequence& ds, std::uint64_t i) {
  return ds.next(i);
}

inline double min_entropy(const ChannelModel& channel) {
  auto h = channel.min_entropy_bits();
  if (!h) throw InvalidArgument("min-entropy not exactly computable for this kind");
  return *h;
}

}  // namespace stego
