#pragma once

#include <gmpxx.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "stego/common.hpp"

namespace stego {

// Exact output-distribution enumerators for small parameter sets. Documents
// are support indices 0..H-1 of a uniform flat channel; joint distributions
// are row-major over H^l cells. Enumeration mirrors the runtime encoder
// semantics draw by draw rather than assuming any symmetry, so these serve
// as independent oracles for the sampler implementations.

struct ExactSymbolDistribution {
  std::vector<double> probs;
  double residual = 0;  // mass beyond the enumerated draw horizon
};

struct ExactJointDistribution {
  std::uint32_t support = 0;
  std::uint64_t length = 0;
  std::vector<double> probs;  // support^length cells, row-major
  double residual = 0;        // truncation mass, zero for complete enumerations
  double fail_prob = 0;       // abort mass for hybrids that can fail
};

inline double tv_distance(const std::vector<double>& a,
                          const std::vector<double>& b) {
  if (a.size() != b.size())
    throw InvalidArgument("distributions must have equal support");
  double s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::fabs(a[i] - b[i]);
  return s / 2.0;
}

// Stateful encoder, one symbol: exact subset dynamic program in rationals.
// State is the set of documents already drawn in this symbol's loop; a fresh
// draw is accepted when the function slice maps it to m, a repeated draw on a
// fresh uniform coin. Either way each draw accepts with probability 2^-w, so
// the undelivered mass after t draws is exactly (1 - 2^-w)^t.
inline ExactSymbolDistribution stf_symbol_output_exact(
    std::uint32_t support, unsigned w, std::uint32_t m,
    double residual_target = 1e-12) {
  if (support < 1 || support > 12)
    throw InvalidArgument("subset enumeration needs support in [1,12]");
  if (w < 1 || w > 8) throw InvalidArgument("symbol width must be in [1,8]");
  if (m >= (1u << w)) throw InvalidArgument("symbol out of range for width");
  if (residual_target <= 0 || residual_target >= 1)
    throw InvalidArgument("residual target must be in (0,1)");

  mpq_class accept(1, 1u << w);        // per-draw acceptance probability
  mpq_class reject = 1 - accept;
  mpq_class draw(1, support);          // uniform channel
  unsigned steps = static_cast<unsigned>(std::ceil(
      std::log(residual_target) / std::log(1.0 - std::ldexp(1.0, -int(w)))));

  std::unordered_map<std::uint32_t, mpq_class> cur;
  cur.emplace(0u, mpq_class(1));
  std::vector<mpq_class> out(support, mpq_class(0));
  for (unsigned t = 0; t < steps; ++t) {
    std::unordered_map<std::uint32_t, mpq_class> next;
    for (auto& [seen, mass] : cur) {
      for (std::uint32_t s = 0; s < support; ++s) {
        mpq_class pm = mass * draw;
        out[s] += pm * accept;
        next[seen | (1u << s)] += pm * reject;
      }
    }
    cur = std::move(next);
  }
  mpq_class delivered = 0;
  for (auto& q : out) delivered += q;

  ExactSymbolDistribution res;
  res.probs.reserve(support);
  for (auto& q : out) res.probs.push_back(q.get_d());
  res.residual = mpq_class(1 - delivered).get_d();
  return res;
}

// Full-message distribution of the stateful encoder. Distinct counter slices
// give each symbol an independent function, the seen set resets per symbol
// and the channel is memoryless, so the joint is the product of the exact
// per-symbol marginals.
inline ExactJointDistribution stf_output_exact(
    std::uint32_t support, unsigned w, const std::vector<std::uint32_t>& m,
    double residual_target = 1e-12) {
  if (m.empty() || m.size() > 4)
    throw InvalidArgument("joint enumeration needs 1 to 4 symbols");
  std::vector<ExactSymbolDistribution> marg;
  marg.reserve(m.size());
  for (auto mi : m)
    marg.push_back(stf_symbol_output_exact(support, w, mi, residual_target));

  ExactJointDistribution res;
  res.support = support;
  res.length = m.size();
  std::size_t cells = 1;
  for (std::size_t i = 0; i < m.size(); ++i) cells *= support;
  res.probs.assign(cells, 1.0);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    for (std::size_t i = m.size(); i-- > 0;) {
      res.probs[c] *= marg[i].probs[rest % support];
      rest /= support;
    }
  }
  double kept = 1.0;
  for (auto& d : marg) kept *= 1.0 - d.residual;
  res.residual = 1.0 - kept;
  return res;
}

namespace detail {

// Lazily revealed random function: per document either a known value or a
// bitmask of excluded values. Branch probabilities condition on that
// knowledge exactly, which keeps the enumeration faithful to a function
// drawn uniformly once per message.
struct StlExactWalker {
  std::uint32_t H;
  unsigned w;
  std::uint64_t k;
  const std::vector<std::uint32_t>& m;
  std::vector<int> known;
  std::vector<std::uint32_t> excluded;
  std::vector<std::uint32_t> outputs;
  std::vector<long double> joint;
  long double drawp;

  StlExactWalker(std::uint32_t H_, unsigned w_, std::uint64_t k_,
                 const std::vector<std::uint32_t>& m_)
      : H(H_), w(w_), k(k_), m(m_), known(H_, -1), excluded(H_, 0),
        outputs(m_.size(), 0), drawp(1.0L / H_) {
    std::size_t cells = 1;
    for (std::size_t i = 0; i < m.size(); ++i) cells *= H;
    joint.assign(cells, 0.0L);
  }

  void record(long double mass) {
    std::size_t idx = 0;
    for (auto s : outputs) idx = idx * H + s;
    joint[idx] += mass;
  }

  void symbol(std::size_t i, long double mass) {
    if (i == m.size()) {
      record(mass);
      return;
    }
    draw(i, 1, mass);
  }

  void emit(std::size_t i, std::uint32_t s, long double mass) {
    outputs[i] = s;
    symbol(i + 1, mass);
  }

  void after(std::size_t i, std::uint64_t j, std::uint32_t s, long double mass,
             bool accepted) {
    if (accepted || j == k)
      emit(i, s, mass);
    else
      draw(i, j + 1, mass);
  }

  void draw(std::size_t i, std::uint64_t j, long double mass) {
    std::uint32_t target = m[i];
    for (std::uint32_t s = 0; s < H; ++s) {
      long double pm = mass * drawp;
      if (known[s] >= 0) {
        after(i, j, s, pm, static_cast<std::uint32_t>(known[s]) == target);
        continue;
      }
      std::uint32_t ex = excluded[s];
      if (ex >> target & 1u) {
        after(i, j, s, pm, false);
        continue;
      }
      auto nfree = static_cast<std::uint32_t>((1u << w) - std::popcount(ex));
      known[s] = static_cast<int>(target);
      after(i, j, s, pm / nfree, true);
      known[s] = -1;
      if (nfree > 1) {
        excluded[s] = ex | (1u << target);
        after(i, j, s, pm * (nfree - 1) / nfree, false);
        excluded[s] = ex;
      }
    }
  }
};

}  // namespace detail

// Bounded encoder with a message-scoped random function: exact complete
// enumeration (every path ends within k draws per symbol, so there is no
// truncation residual).
inline ExactJointDistribution stl_output_exact(
    std::uint32_t support, unsigned w, const std::vector<std::uint32_t>& m,
    std::uint64_t k) {
  if (support < 1 || support > 8)
    throw InvalidArgument("bounded enumeration needs support in [1,8]");
  if (w < 1 || w > 2) throw InvalidArgument("bounded enumeration needs width 1 or 2");
  if (k < 1 || k > 4) throw InvalidArgument("bounded enumeration needs k in [1,4]");
  if (m.empty() || m.size() > 2)
    throw InvalidArgument("bounded enumeration needs 1 or 2 symbols");
  for (auto mi : m)
    if (mi >= (1u << w)) throw InvalidArgument("symbol out of range for width");

  detail::StlExactWalker walker(support, w, k, m);
  walker.symbol(0, 1.0L);

  ExactJointDistribution res;
  res.support = support;
  res.length = m.size();
  res.probs.reserve(walker.joint.size());
  long double total = 0;
  for (auto v : walker.joint) {
    total += v;
    res.probs.push_back(static_cast<double>(v));
  }
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-12)
    throw StegoError("enumeration mass does not sum to one");
  return res;
}

namespace detail {

// Collision-aborting hybrid walker shared by the explicit-function and
// fresh-coin variants. Aborts when a draw repeats any logged document or a
// symbol needs more than k draws; a fail consumes the whole remaining mass
// of its branch.
struct HybridExactWalker {
  std::uint32_t H;
  unsigned w;
  std::uint64_t k;
  const std::vector<std::uint32_t>& m;
  const std::vector<std::uint32_t>* func;  // null for the fresh-coin variant
  std::vector<std::uint32_t> outputs;
  std::vector<long double> joint;
  long double fail = 0;
  long double drawp;

  HybridExactWalker(std::uint32_t H_, unsigned w_, std::uint64_t k_,
                    const std::vector<std::uint32_t>& m_,
                    const std::vector<std::uint32_t>* func_)
      : H(H_), w(w_), k(k_), m(m_), func(func_), outputs(m_.size(), 0),
        drawp(1.0L / H_) {
    std::size_t cells = 1;
    for (std::size_t i = 0; i < m.size(); ++i) cells *= H;
    joint.assign(cells, 0.0L);
  }

  void record(long double mass) {
    std::size_t idx = 0;
    for (auto s : outputs) idx = idx * H + s;
    joint[idx] += mass;
  }

  void symbol(std::size_t i, std::uint32_t logged, long double mass) {
    if (i == m.size()) {
      record(mass);
      return;
    }
    draw(i, 1, logged, mass);
  }

  void draw(std::size_t i, std::uint64_t j, std::uint32_t logged,
            long double mass) {
    if (j == k + 1) {
      fail += mass;
      return;
    }
    std::uint32_t target = m[i];
    for (std::uint32_t s = 0; s < H; ++s) {
      long double pm = mass * drawp;
      if (logged >> s & 1u) {
        fail += pm;
        continue;
      }
      std::uint32_t next_logged = logged | (1u << s);
      if (func) {
        if ((*func)[s] == target) {
          outputs[i] = s;
          symbol(i + 1, next_logged, pm);
        } else {
          draw(i, j + 1, next_logged, pm);
        }
      } else {
        long double coin = 1.0L / (1u << w);
        outputs[i] = s;
        symbol(i + 1, next_logged, pm * coin);
        draw(i, j + 1, next_logged, pm * (1.0L - coin));
      }
    }
  }
};

inline void check_hybrid_params(std::uint32_t support, unsigned w,
                                const std::vector<std::uint32_t>& m,
                                std::uint64_t k) {
  if (support < 1 || support > 8)
    throw InvalidArgument("hybrid enumeration needs support in [1,8]");
  if (w < 1 || w > 2) throw InvalidArgument("hybrid enumeration needs width 1 or 2");
  if (k < 1 || k > 4) throw InvalidArgument("hybrid enumeration needs k in [1,4]");
  if (m.empty() || m.size() > 2)
    throw InvalidArgument("hybrid enumeration needs 1 or 2 symbols");
  for (auto mi : m)
    if (mi >= (1u << w)) throw InvalidArgument("symbol out of range for width");
}

}  // namespace detail

// Collision-aborting hybrid with the function enumerated explicitly: averages
// the exact per-function outcome over all (2^w)^H assignments.
inline ExactJointDistribution se2_output_exact(
    std::uint32_t support, unsigned w, const std::vector<std::uint32_t>& m,
    std::uint64_t k) {
  detail::check_hybrid_params(support, w, m, k);
  double fcount = std::pow(static_cast<double>(1u << w),
                           static_cast<double>(support));
  if (fcount > 65536.0)
    throw InvalidArgument("function space too large to enumerate");
  auto functions = static_cast<std::uint64_t>(fcount);

  std::size_t cells = 1;
  for (std::size_t i = 0; i < m.size(); ++i) cells *= support;
  std::vector<long double> joint(cells, 0.0L);
  long double fail = 0;
  long double fweight = 1.0L / static_cast<long double>(functions);

  std::vector<std::uint32_t> g(support, 0);
  for (std::uint64_t fi = 0; fi < functions; ++fi) {
    std::uint64_t rest = fi;
    for (std::uint32_t s = 0; s < support; ++s) {
      g[s] = static_cast<std::uint32_t>(rest & ((1u << w) - 1));
      rest >>= w;
    }
    detail::HybridExactWalker walker(support, w, k, m, &g);
    walker.symbol(0, 0, 1.0L);
    for (std::size_t c = 0; c < cells; ++c) joint[c] += fweight * walker.joint[c];
    fail += fweight * walker.fail;
  }

  ExactJointDistribution res;
  res.support = support;
  res.length = m.size();
  res.probs.reserve(cells);
  long double total = fail;
  for (auto v : joint) {
    total += v;
    res.probs.push_back(static_cast<double>(v));
  }
  res.fail_prob = static_cast<double>(fail);
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-12)
    throw StegoError("enumeration mass does not sum to one");
  return res;
}

// Same hybrid with the function test replaced by a fresh uniform coin per
// logged draw. Every tested document is fresh (repeats abort first), so this
// must match the explicit-function hybrid exactly.
inline ExactJointDistribution se3_output_exact(
    std::uint32_t support, unsigned w, const std::vector<std::uint32_t>& m,
    std::uint64_t k) {
  detail::check_hybrid_params(support, w, m, k);
  detail::HybridExactWalker walker(support, w, k, m, nullptr);
  walker.symbol(0, 0, 1.0L);

  std::size_t cells = walker.joint.size();
  ExactJointDistribution res;
  res.support = support;
  res.length = m.size();
  res.probs.reserve(cells);
  long double total = walker.fail;
  for (auto v : walker.joint) {
    total += v;
    res.probs.push_back(static_cast<double>(v));
  }
  res.fail_prob = static_cast<double>(walker.fail);
  if (std::fabs(static_cast<double>(total) - 1.0) > 1e-12)
    throw StegoError("enumeration mass does not sum to one");
  return res;
}

// Unbounded coin-accept sampler: no log, no abort, so each symbol is an
// independent truncated geometric over channel draws and the joint is the
// product of marginals. The per-symbol residual (1 - 2^-w)^steps is reported
// rather than redistributed.
inline ExactJointDistribution se4_output_exact(
    std::uint32_t support, unsigned w, const std::vector<std::uint32_t>& m,
    unsigned steps_per_symbol = 64) {
  if (support < 1 || support > 64)
    throw InvalidArgument("support must be in [1,64]");
  if (w < 1 || w > 8) throw InvalidArgument("symbol width must be in [1,8]");
  if (m.empty() || m.size() > 4)
    throw InvalidArgument("joint enumeration needs 1 to 4 symbols");
  if (steps_per_symbol < 1) throw InvalidArgument("need at least one step");

  long double coin = 1.0L / (1u << w);
  std::vector<long double> marginal(support, 0.0L);
  long double undelivered = 1.0L;
  for (unsigned t = 0; t < steps_per_symbol; ++t) {
    for (std::uint32_t s = 0; s < support; ++s)
      marginal[s] += undelivered * coin / support;
    undelivered *= 1.0L - coin;
  }

  ExactJointDistribution res;
  res.support = support;
  res.length = m.size();
  std::size_t cells = 1;
  for (std::size_t i = 0; i < m.size(); ++i) cells *= support;
  res.probs.assign(cells, 1.0);
  for (std::size_t c = 0; c < cells; ++c) {
    std::size_t rest = c;
    for (std::size_t i = m.size(); i-- > 0;) {
      res.probs[c] *= static_cast<double>(marginal[rest % support]);
      rest /= support;
    }
  }
  long double kept = 1.0L;
  for (std::size_t i = 0; i < m.size(); ++i) kept *= 1.0L - undelivered;
  res.residual = static_cast<double>(1.0L - kept);
  return res;
}

// Exact two-symbol collision probability of the bounded encoder at width 1
// via a count-based dynamic program in rationals. Documents are exchangeable
// under the uniform flat channel, so the reachable knowledge is described by
// counts of revealed documents, which scales to large supports where the
// path enumeration cannot go.
inline double stl_collision_exact_symmetric(std::uint32_t H, std::uint64_t k,
                                            std::uint32_t m1, std::uint32_t m2) {
  if (H < 2) throw InvalidArgument("need at least two support documents");
  if (k < 1 || k > 64) throw InvalidArgument("draw budget must be in [1,64]");
  if (m1 > 1 || m2 > 1) throw InvalidArgument("width-1 symbols must be 0 or 1");

  mpq_class half(1, 2);
  mpq_class invH(1, H);

  // First symbol: state is the number of revealed documents (all mapped away
  // from m1). Accepting ends the symbol with the output's value known as m1;
  // exhausting k draws emits the k-th draw, a revealed document mapped away
  // from m1 either way.
  // start[v][a]: weight of entering the second symbol with the first output
  // mapped to value v (0 here means m1, 1 means 1-m1) and a other revealed
  // documents, all mapped to 1-m1.
  std::vector<std::vector<mpq_class>> start(2,
      std::vector<mpq_class>(k + 2, mpq_class(0)));
  {
    std::vector<mpq_class> cur(k + 2, mpq_class(0));
    cur[0] = 1;
    for (std::uint64_t j = 0; j < k; ++j) {
      std::vector<mpq_class> next(k + 2, mpq_class(0));
      bool last = j + 1 == k;
      for (std::uint64_t r = 0; r <= j; ++r) {
        if (cur[r] == 0) continue;
        mpq_class revealed = mpq_class(static_cast<unsigned long>(r)) * invH;
        mpq_class fresh = mpq_class(static_cast<unsigned long>(H - r)) * invH;
        // fresh draw, accepted: output value m1, r others revealed
        start[0][r] += cur[r] * fresh * half;
        // fresh draw, rejected
        if (last)
          start[1][r] += cur[r] * fresh * half;  // k-th draw emitted, r others
        else
          next[r + 1] += cur[r] * fresh * half;
        // revealed draw, rejected outright
        if (r > 0) {
          if (last)
            start[1][r - 1] += cur[r] * revealed;  // emitted from revealed set
          else
            next[r] += cur[r] * revealed;
        }
      }
      cur = std::move(next);
    }
  }

  // Second symbol: knowledge is the first output (value v1), a old revealed
  // documents mapped to 1-m1, and b documents revealed during this symbol,
  // mapped to 1-m2. A collision is an accepted draw of the first output or a
  // k-th-draw emission that happens to be it.
  mpq_class collision = 0;
  for (int vbit = 0; vbit < 2; ++vbit) {
    std::uint32_t v1 = vbit == 0 ? m1 : 1 - m1;
    std::uint32_t old_val = 1 - m1;
    for (std::uint64_t a = 0; a + 1 <= H && a <= k; ++a) {
      mpq_class weight = start[vbit][a];
      if (weight == 0) continue;
      std::vector<mpq_class> cur(k + 2, mpq_class(0));
      cur[0] = 1;
      mpq_class coll = 0;
      for (std::uint64_t j = 0; j < k; ++j) {
        std::vector<mpq_class> next(k + 2, mpq_class(0));
        bool last = j + 1 == k;
        for (std::uint64_t b = 0; b <= j; ++b) {
          if (cur[b] == 0) continue;
          mpq_class first = invH;
          mpq_class old_mass = mpq_class(static_cast<unsigned long>(a)) * invH;
          mpq_class newr = mpq_class(static_cast<unsigned long>(b)) * invH;
          mpq_class unknown =
              mpq_class(static_cast<unsigned long>(H - 1 - a - b)) * invH;
          // draw the first output
          if (v1 == m2) {
            coll += cur[b] * first;  // accepted, collision
          } else if (last) {
            coll += cur[b] * first;  // emitted as the k-th draw, collision
          } else {
            next[b] += cur[b] * first;
          }
          // draw an old revealed document (accepts iff its value is m2)
          if (old_val != m2 && !last) next[b] += cur[b] * old_mass;
          // draw a document revealed this symbol (always rejects)
          if (!last) next[b] += cur[b] * newr;
          // fresh draw: accept half, reveal half
          if (!last) next[b + 1] += cur[b] * unknown * half;
        }
        cur = std::move(next);
      }
      collision += weight * coll;
    }
  }
  return mpq_class(collision).get_d();
}

}  // namespace stego
