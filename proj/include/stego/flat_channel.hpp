#pragma once

#include <array>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "stego/channel.hpp"
#include "stego/common.hpp"
#include "stego/hypergeom.hpp"
#include "stego/prf.hpp"
#include "stego/rng.hpp"

namespace stego {

// Channel seed. Fixed for the channel's lifetime; every interval answer is a
// deterministic function of (omega, S, H, i, a, b).
struct FlatChannelSeed {
  std::vector<std::uint8_t> omega;

  std::size_t bit_count() const { return omega.size() * 8; }

  static FlatChannelSeed from_hex(const std::string& hex) {
    FlatChannelSeed s{stego::from_hex(hex)};
    if (s.omega.empty()) throw InvalidArgument("seed must be nonempty");
    return s;
  }

  static FlatChannelSeed random(RandomSource& rng, std::size_t bits = 256) {
    if (bits == 0 || bits % 8 != 0)
      throw InvalidArgument("seed length must be a positive multiple of 8 bits");
    FlatChannelSeed s;
    s.omega.resize(bits / 8);
    for (auto& byte : s.omega)
      byte = static_cast<std::uint8_t>(rng.bits(8));
    return s;
  }

  std::string to_hex() const { return stego::to_hex(omega); }
};

struct IntervalQuery {
  std::uint32_t S = 0;
  std::uint32_t H = 0;
  std::uint64_t i = 0;
  std::uint32_t a = 0;
  std::uint32_t b = 0;
};

// Deviate bytes for one node split: successive 256-bit keyed-function blocks
// on (tree domain, index i, node), consumed in order.
class PrfDeviateSource final : public DeviateSource {
 public:
  PrfDeviateSource(const Prf& prf, std::uint64_t i, std::uint64_t node)
      : prf_(prf), i_(i), node_(node) {}

  void fill(std::uint8_t* out, std::size_t n) override {
    while (n > 0) {
      if (off_ == block_.size()) {
        block_ = prf_.block256(PrfInput{PrfDomain::tree, i_, node_, next_block_++});
        off_ = 0;
      }
      std::size_t take = block_.size() - off_;
      if (take > n) take = n;
      std::memcpy(out, block_.data() + off_, take);
      off_ += take;
      out += take;
      n -= take;
    }
  }

 private:
  Prf prf_;
  std::uint64_t i_, node_;
  std::uint64_t next_block_ = 0;
  std::array<std::uint8_t, 32> block_{};
  std::size_t off_ = block_.size();
};

// Truthful pseudorandom flat channel: uniform on a pseudorandom size-H
// subset of [0,S) per history-length index. Backed by a lazily-filled
// binary interval tree whose root count is pinned to H; a node splits by
// drawing the left-child count hypergeometrically, so children always sum
// to the parent and every leaf pattern has exactly H ones.
//
// The tree is pure memoization of a deterministic function of the seed, so
// racing fills write identical values and the channel stays shareable.
class FlatChannel final : public ChannelModel, public SupportTestable {
 public:
  FlatChannel(FlatChannelSeed seed, std::uint32_t S, std::uint32_t H)
      : seed_(std::move(seed)),
        prf_(StegoKey{seed_.omega}),
        S_(S),
        H_(H),
        node_slots_(2ull * std::bit_ceil(std::uint64_t{S})) {
    if (seed_.omega.empty()) throw InvalidArgument("seed must be nonempty");
    if (H == 0 || H > S) throw InvalidArgument("need 0 < H <= S");
    if (S >= (1u << 31)) throw LimitExceeded("alphabet size too large");
  }

  std::uint32_t alphabet_size() const override { return S_; }
  std::uint32_t support_size() const { return H_; }
  const FlatChannelSeed& seed() const { return seed_; }
  std::string kind() const override { return "flat-pseudorandom"; }

  std::optional<double> min_entropy_bits() const override {
    return std::log2(static_cast<double>(H_));
  }

  // Number of support elements of D_i in [a,b]. Deterministic in
  // (seed, S, H, i, a, b); the root query returns exactly H.
  std::uint32_t interval_sum(std::uint64_t i, std::uint32_t a, std::uint32_t b) const {
    if (i == 0) throw InvalidArgument("history-length index starts at 1");
    if (a > b || b >= S_) throw InvalidArgument("interval out of range");
    Tree& t = tree_for(i);
    return query_below(t, i, 1, 0, S_ - 1, root_count(t), a, b);
  }

  std::uint32_t interval_sum(const IntervalQuery& q) const {
    if (q.S != S_ || q.H != H_)
      throw InvalidArgument("query parameters do not match this channel");
    return interval_sum(q.i, q.a, q.b);
  }

  bool insupp(std::uint64_t i, DocumentId s) const {
    if (s >= S_) throw InvalidArgument("symbol out of range");
    return interval_sum(i, s, s) == 1;
  }

  // Uniform support element: binary descent with the branch chosen by
  // r uniform in {1..total}, left iff r <= left count. Composes to
  // probability 1/H per support element; two interval queries per level.
  DocumentId rndelt(std::uint64_t i, RandomSource& rng) const {
    std::uint32_t a = 0, b = S_ - 1;
    while (a < b) {
      std::uint32_t mid = a + (b - a) / 2;
      std::uint32_t total = interval_sum(i, a, b);
      std::uint32_t left = interval_sum(i, a, mid);
      std::uint64_t r = rng.uniform_below(total) + 1;
      if (r <= left)
        b = mid;
      else
        a = mid + 1;
    }
    return a;
  }

  DocumentId sample_at_index(std::uint64_t i, RandomSource& rng) const override {
    return rndelt(i, rng);
  }

  bool in_support(std::uint64_t i, DocumentId s) const override {
    return insupp(i, s);
  }

  std::vector<DocumentId> enumerate_support(std::uint64_t i) const override {
    if (i == 0) throw InvalidArgument("history-length index starts at 1");
    Tree& t = tree_for(i);
    std::vector<DocumentId> out;
    out.reserve(H_);
    collect_below(t, i, 1, 0, S_ - 1, root_count(t), out);
    return out;
  }

 private:
  static constexpr std::uint32_t kUnset = 0xFFFFFFFFu;
  // Dense per-index node arrays up to this alphabet size, hash map above.
  static constexpr std::uint32_t kDenseLimit = 1u << 16;

  struct Tree {
    explicit Tree(std::size_t dense_slots) : dense(dense_slots) {
      for (auto& c : dense) c.store(kUnset, std::memory_order_relaxed);
    }
    std::vector<std::atomic<std::uint32_t>> dense;
    std::mutex mu;
    std::unordered_map<std::uint64_t, std::uint32_t> sparse;
  };

  Tree& tree_for(std::uint64_t i) const {
    std::lock_guard<std::mutex> lock(trees_mu_);
    auto& slot = trees_[i];
    if (!slot) slot = std::make_unique<Tree>(S_ <= kDenseLimit ? node_slots_ : 0);
    return *slot;
  }

  std::uint32_t load_node(Tree& t, std::uint64_t node) const {
    if (!t.dense.empty())
      return t.dense[node].load(std::memory_order_acquire);
    std::lock_guard<std::mutex> lock(t.mu);
    auto it = t.sparse.find(node);
    return it == t.sparse.end() ? kUnset : it->second;
  }

  void store_node(Tree& t, std::uint64_t node, std::uint32_t count) const {
    if (!t.dense.empty()) {
      t.dense[node].store(count, std::memory_order_release);
      return;
    }
    std::lock_guard<std::mutex> lock(t.mu);
    t.sparse.emplace(node, count);
  }

  std::uint32_t root_count(Tree& t) const {
    std::uint32_t c = load_node(t, 1);
    if (c != kUnset) return c;
    store_node(t, 1, H_);
    return H_;
  }

  // Count of child node `2*parent + side`, splitting the parent on demand:
  // the left share is hypergeometric in (left positions, right positions,
  // occupied), with deviates from the seed-keyed stream for the parent.
  // Racing fills recompute identical values, so no ordering is needed.
  std::uint32_t child_count(Tree& t, std::uint64_t i, std::uint64_t child,
                            std::uint32_t pa, std::uint32_t pb,
                            std::uint32_t parent_count) const {
    std::uint32_t c = load_node(t, child);
    if (c != kUnset) return c;
    std::uint64_t parent = child / 2;
    std::uint32_t mid = pa + (pb - pa) / 2;
    PrfDeviateSource src(prf_, i, parent);
    auto left = static_cast<std::uint32_t>(
        hypergeometric_sample(mid - pa + 1, pb - mid, parent_count, src));
    store_node(t, parent * 2, left);
    store_node(t, parent * 2 + 1, parent_count - left);
    return child == parent * 2 ? left : parent_count - left;
  }

  // Standard segment query over node [na..nb] whose count is already known;
  // child counts are materialized before descending, so laziness is
  // invisible to callers.
  std::uint32_t query_below(Tree& t, std::uint64_t i, std::uint64_t node,
                            std::uint32_t na, std::uint32_t nb,
                            std::uint32_t count, std::uint32_t a,
                            std::uint32_t b) const {
    if (b < na || nb < a) return 0;
    if (a <= na && nb <= b) return count;
    std::uint32_t mid = na + (nb - na) / 2;
    std::uint32_t left = child_count(t, i, node * 2, na, nb, count);
    return query_below(t, i, node * 2, na, mid, left, a, b) +
           query_below(t, i, node * 2 + 1, mid + 1, nb, count - left, a, b);
  }

  void collect_below(Tree& t, std::uint64_t i, std::uint64_t node,
                     std::uint32_t na, std::uint32_t nb, std::uint32_t count,
                     std::vector<DocumentId>& out) const {
    if (count == 0) return;
    if (na == nb) {
      out.push_back(na);
      return;
    }
    std::uint32_t mid = na + (nb - na) / 2;
    std::uint32_t left = child_count(t, i, node * 2, na, nb, count);
    collect_below(t, i, node * 2, na, mid, left, out);
    collect_below(t, i, node * 2 + 1, mid + 1, nb, count - left, out);
  }

  FlatChannelSeed seed_;
  Prf prf_;
  std::uint32_t S_, H_;
  std::size_t node_slots_;
  mutable std::mutex trees_mu_;
  mutable std::map<std::uint64_t, std::unique_ptr<Tree>> trees_;
};

inline std::uint32_t interval_sum(const FlatChannel& chan, const IntervalQuery& q) {
  return chan.interval_sum(q);
}

inline bool insupp(const FlatChannel& chan, std::uint64_t i, DocumentId s) {
  return chan.insupp(i, s);
}

inline DocumentId rndelt(const FlatChannel& chan, std::uint64_t i, RandomSource& rng) {
  return chan.rndelt(i, rng);
}

inline TrueRandomFlatChannel make_true_random_flat(std::uint32_t S, std::uint32_t H,
                                                   std::uint64_t max_i,
                                                   RandomSource& rng) {
  return TrueRandomFlatChannel(S, H, max_i, rng);
}

}  // namespace stego
