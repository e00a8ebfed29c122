#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "stego/bounds.hpp"
#include "stego/channel.hpp"
#include "stego/common.hpp"
#include "stego/enumeration.hpp"
#include "stego/prf.hpp"
#include "stego/rng.hpp"
#include "stego/stats.hpp"
#include "stego/stf.hpp"
#include "stego/stl.hpp"

namespace stego {

// Experiment harness: instrumented runs, detectors and estimators that pit
// the samplers against their closed-form bounds. Every run is driven by a
// seeded RandomSource; per-trial generators are spawned by trial index so
// results do not depend on execution order.

// Total weight of a stegotext against committed draw streams: the sum over
// symbols of the 1-based position of the first occurrence of that symbol's
// document in its stream. A document its stream never offered is an error,
// not a weight.
inline std::uint64_t weight(const std::vector<DocumentId>& stegotext,
                            const std::vector<std::vector<DocumentId>>& streams,
                            std::uint64_t start_i = 1) {
  if (start_i == 0) throw InvalidArgument("stream index starts at 1");
  std::uint64_t total = 0;
  for (std::size_t off = 0; off < stegotext.size(); ++off) {
    std::uint64_t i = start_i + off;
    if (i > streams.size())
      throw InvalidArgument("no committed draws for this index");
    const auto& stream = streams[i - 1];
    auto it = std::find(stream.begin(), stream.end(), stegotext[off]);
    if (it == stream.end())
      throw StegoError("document never offered by the draw sequence");
    total += static_cast<std::uint64_t>(it - stream.begin()) + 1;
  }
  return total;
}

inline std::uint64_t weight(const std::vector<DocumentId>& stegotext,
                            const DrawSequence& ds, std::uint64_t start_i = 1) {
  return weight(stegotext, ds.recorded(), start_i);
}

// Support detector: fires iff some document of the stegotext lies outside
// the channel support at its position. Rejection samplers only ever emit
// channel draws, so against them this must never fire.
inline bool nonsupport_detector(const SupportTestable& support,
                                const std::vector<DocumentId>& stegotext,
                                std::uint64_t start_i = 1) {
  if (start_i == 0) throw InvalidArgument("history-length index starts at 1");
  for (std::size_t off = 0; off < stegotext.size(); ++off)
    if (!support.in_support(start_i + off, stegotext[off])) return true;
  return false;
}

struct ReliabilityEstimate {
  std::uint64_t trials = 0;
  std::uint64_t failures = 0;
  double failure_rate = 0;
  Interval failure_ci;  // Wilson 95% interval on the failure rate
};

// Runs `trial(index, rng)` with a generator spawned per trial index and
// reports the failure rate with its Wilson interval. A trial returns true
// on success.
template <class Trial>
ReliabilityEstimate estimate_reliability(std::uint64_t trials,
                                         const RandomSource& base,
                                         Trial&& trial) {
  if (trials < 100)
    throw InvalidArgument("reliability estimate needs at least 100 trials");
  ReliabilityEstimate est;
  est.trials = trials;
  for (std::uint64_t t = 0; t < trials; ++t) {
    RandomSource r = base.spawn(t);
    if (!trial(t, r)) ++est.failures;
  }
  est.failure_rate =
      static_cast<double>(est.failures) / static_cast<double>(trials);
  est.failure_ci = wilson_interval(est.failures, trials);
  return est;
}

struct TvEstimate {
  double tv = 0;
  double bias_bound = 0;  // worst-case plug-in bias, zero when exact
  std::uint64_t trials = 0;
  std::uint64_t cells = 0;
  bool exact = false;
};

inline TvEstimate estimate_tv_distance_exact(const std::vector<double>& p,
                                             const std::vector<double>& q) {
  if (p.size() > 1000000)
    throw LimitExceeded("exact total-variation limited to 10^6 cells");
  TvEstimate est;
  est.tv = tv_distance(p, q);
  est.cells = p.size();
  est.exact = true;
  return est;
}

// Plug-in estimate from equal-size samples of both distributions. The
// plug-in statistic overestimates on average by at most (cells-1)/(2 trials),
// reported as bias_bound.
template <class SamplerA, class SamplerB>
TvEstimate estimate_tv_distance_mc(std::uint64_t cells, std::uint64_t trials,
                                   SamplerA&& a, SamplerB&& b,
                                   RandomSource& rng) {
  if (cells < 2) throw InvalidArgument("need at least two cells");
  if (cells > 10000000) throw LimitExceeded("too many cells to tabulate");
  if (trials < 1) throw InvalidArgument("need at least one trial");
  std::vector<std::uint64_t> ca(cells, 0), cb(cells, 0);
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::uint64_t xa = a(rng);
    std::uint64_t xb = b(rng);
    if (xa >= cells || xb >= cells)
      throw InvalidArgument("sampler produced an out-of-range cell");
    ++ca[xa];
    ++cb[xb];
  }
  double s = 0;
  for (std::uint64_t c = 0; c < cells; ++c)
    s += std::fabs(static_cast<double>(ca[c]) - static_cast<double>(cb[c]));
  TvEstimate est;
  est.tv = s / (2.0 * static_cast<double>(trials));
  est.bias_bound = static_cast<double>(cells - 1) / (2.0 * static_cast<double>(trials));
  est.trials = trials;
  est.cells = cells;
  return est;
}

// Induced hiddentext-channel statistics of the stateful encoder run against
// an ideal (truly random) symbol function on a flat channel of min-entropy h,
// isolating the information-theoretic error from any PRF slack. Each trial
// encodes one uniform symbol on its own counter slice and decodes it back.
struct ErrorChannelStats {
  std::uint64_t symbols = 0;
  std::uint64_t errors = 0;
  double error_rate = 0;
  double expected_rate = 0;  // 2^-h (2^w - 1)
  double bound_rate = 0;     // 2^{w-h}
  double mean_samples = 0;
  // Histogram of (decoded - sent - 1) mod 2^w over error events; the induced
  // channel is symmetric, so this should be uniform over its 2^w - 1 cells.
  std::vector<std::uint64_t> wrong_offset_hist;
  double wrong_uniform_p = 1.0;
};

inline ErrorChannelStats stf_error_channel_stats(std::uint64_t symbols,
                                                 unsigned h, unsigned w,
                                                 RandomSource& rng,
                                                 std::uint32_t alphabet_factor = 4) {
  if (h < 1 || h > 16) throw InvalidArgument("entropy parameter must be in [1,16]");
  if (w < 1 || w > 8) throw InvalidArgument("symbol width must be in [1,8]");
  if (symbols < 1) throw InvalidArgument("need at least one symbol");
  if (alphabet_factor < 1) throw InvalidArgument("alphabet factor must be at least 1");

  std::uint32_t H = 1u << h;
  std::uint32_t S = H * alphabet_factor;
  TrueRandomFlatChannel chan(S, H, 1, rng);
  RandomFunctionOracle oracle(w, rng.spawn(0x0eac1e));

  ErrorChannelStats st;
  st.symbols = symbols;
  st.expected_rate = stf_symbol_error_prob(h, w);
  st.bound_rate = std::ldexp(1.0, static_cast<int>(w) - static_cast<int>(h));
  st.wrong_offset_hist.assign((1u << w) - 1, 0);

  std::uint32_t mask = (1u << w) - 1;
  std::uint64_t total_samples = 0;
  for (std::uint64_t t = 0; t < symbols; ++t) {
    auto m = static_cast<std::uint32_t>(rng.bits(w));
    std::uint64_t ctr = t + 1;
    std::uint64_t samples = 0;
    DocumentId s = stf_encode_one(oracle, m, ctr, 1, chan, rng, &samples);
    total_samples += samples;
    std::uint32_t d = oracle.eval(ctr, s);
    if (d != m) {
      ++st.errors;
      st.wrong_offset_hist[((d + (1u << w) - m) & mask) - 1]++;
    }
  }
  st.error_rate = static_cast<double>(st.errors) / static_cast<double>(symbols);
  st.mean_samples =
      static_cast<double>(total_samples) / static_cast<double>(symbols);
  if (st.wrong_offset_hist.size() >= 2 && st.errors > 0)
    st.wrong_uniform_p = chi_square_uniform(st.wrong_offset_hist).p_value;
  return st;
}

// Instrumented query-count run: encodes random messages, counts channel
// queries per hiddentext symbol, measures unreliability and the non-support
// detector rate on the outputs, and checks the measured mean against the
// query lower bound evaluated at those measured rates.
enum class SystemKind { stf, stl };

struct QueryCountReport {
  std::string system;
  unsigned w = 0;
  std::uint64_t k = 0;  // draw budget, bounded system only
  std::uint64_t messages = 0;
  std::uint64_t symbols_per_message = 0;
  std::uint64_t total_symbols = 0;
  std::uint64_t total_queries = 0;
  std::uint64_t output_documents = 0;
  std::uint64_t nonsupport_documents = 0;
  std::uint64_t failed_messages = 0;
  double mean_queries_per_symbol = 0;
  double p50 = 0, p90 = 0, p99 = 0;
  double rho_hat = 0;  // measured message unreliability
  double eps_hat = 0;  // measured non-support rate over output documents
  double R = 0;        // S / (S - H)
  double bound = 0;    // query lower bound at the measured rates
  bool bound_holds = false;
};

inline QueryCountReport query_counting_run(
    SystemKind sys, const StegoKey& key, unsigned w, std::uint64_t k,
    std::uint64_t l, std::uint64_t messages, const ChannelModel& chan,
    const SupportTestable& support, std::uint32_t S, std::uint32_t H,
    RandomSource& rng) {
  if (l < 1) throw InvalidArgument("need at least one symbol per message");
  if (messages < 1) throw InvalidArgument("need at least one message");
  if (H >= S) throw InvalidArgument("query bound needs H < S");

  QueryCountReport rep;
  rep.system = sys == SystemKind::stf ? "stf" : "stl";
  rep.w = w;
  rep.k = sys == SystemKind::stl ? k : 0;
  rep.messages = messages;
  rep.symbols_per_message = l;
  rep.R = static_cast<double>(S) / static_cast<double>(S - H);

  CountingChannel counter(chan);
  KeyedSymbolFunction f(
      key, sys == SystemKind::stf ? PrfDomain::stf : PrfDomain::stl, w);
  StfState enc_state;

  std::vector<std::uint64_t> per_symbol;
  per_symbol.reserve(messages * l);
  std::vector<std::uint32_t> symbols(l);
  History empty;
  for (std::uint64_t msg = 0; msg < messages; ++msg) {
    for (auto& m : symbols) m = static_cast<std::uint32_t>(rng.bits(w));
    std::vector<DocumentId> stegotext;
    std::vector<std::uint32_t> decoded;
    if (sys == SystemKind::stf) {
      StfState dec_state = enc_state;
      stegotext = stf_encode_symbols(f, symbols, empty, enc_state, counter,
                                     rng, &per_symbol);
      decoded = stf_decode_symbols(f, stegotext, dec_state);
    } else {
      stegotext =
          stl_encode_symbols(f, symbols, empty, k, counter, rng, &per_symbol);
      decoded = stl_decode_symbols(f, stegotext);
    }
    if (decoded != symbols) ++rep.failed_messages;
    rep.output_documents += stegotext.size();
    for (std::size_t off = 0; off < stegotext.size(); ++off)
      if (!support.in_support(1 + off, stegotext[off]))
        ++rep.nonsupport_documents;
  }

  rep.total_symbols = per_symbol.size();
  rep.total_queries = counter.queries();
  std::uint64_t check = 0;
  for (auto q : per_symbol) check += q;
  if (check != rep.total_queries)
    throw StegoError("per-symbol counts disagree with channel instrumentation");

  rep.mean_queries_per_symbol = static_cast<double>(rep.total_queries) /
                                static_cast<double>(rep.total_symbols);
  std::sort(per_symbol.begin(), per_symbol.end());
  auto rank = [&](double p) {
    auto idx = static_cast<std::size_t>(
        p * static_cast<double>(per_symbol.size() - 1));
    return static_cast<double>(per_symbol[idx]);
  };
  rep.p50 = rank(0.50);
  rep.p90 = rank(0.90);
  rep.p99 = rank(0.99);
  rep.rho_hat = static_cast<double>(rep.failed_messages) /
                static_cast<double>(rep.messages);
  rep.eps_hat = static_cast<double>(rep.nonsupport_documents) /
                static_cast<double>(rep.output_documents);
  rep.bound = lower_bound_queries(w, rep.rho_hat, rep.eps_hat, rep.R);
  rep.bound_holds = rep.mean_queries_per_symbol >= rep.bound;
  return rep;
}

// Public multiply-shift hash in place of the keyed function: measures the
// per-symbol bias this leaves on a flat channel (exactly, by enumerating the
// support) and the growth of the l-fold distance between channel and encoder
// outputs. Within a hash cell the channel and the matching encoder share the
// same conditional law, so the vector of cell counts carries their entire
// difference and the l-fold distance is computed on count vectors.
struct BiasExperimentReport {
  unsigned h = 0, w = 0;
  std::uint64_t l = 0;
  std::uint64_t hash_a = 0, hash_b = 0;  // public hash parameters
  std::vector<double> cell_mass;         // exact per-cell support mass
  double exact_bias_max = 0;             // max_c |q_c - 2^-w|
  double exact_bias_tv = 0;              // (1/2) sum_c |q_c - 2^-w|
  double predicted_bias = 0;             // 2^{(w-h)/2}
  double lfold_tv_exact = 0;
  double lfold_tv_mc = 0;
  double lfold_mc_bias_bound = 0;
  std::uint64_t lfold_mc_trials = 0;
  double sqrt_l_times_tv = 0;            // root-l growth reference point
};

namespace detail {

inline double log_multinomial_coef(std::uint64_t l,
                                   const std::vector<std::uint32_t>& n) {
  double v = std::lgamma(static_cast<double>(l) + 1.0);
  for (auto c : n) v -= std::lgamma(static_cast<double>(c) + 1.0);
  return v;
}

}  // namespace detail

inline BiasExperimentReport public_hash_bias_experiment(unsigned h, unsigned w,
                                                        std::uint64_t l,
                                                        std::uint64_t mc_trials,
                                                        RandomSource& rng) {
  if (h < 1 || h > 14) throw InvalidArgument("entropy parameter must be in [1,14]");
  if (w < 1 || w > 3) throw InvalidArgument("symbol width must be in [1,3]");
  if (l < 1 || l > 32) throw InvalidArgument("message length must be in [1,32]");
  if (mc_trials < 100) throw InvalidArgument("need at least 100 trials");

  constexpr std::uint64_t kAlphabet = 1ull << 16;
  std::uint32_t H = 1u << h;
  std::uint32_t cells = 1u << w;

  BiasExperimentReport rep;
  rep.h = h;
  rep.w = w;
  rep.l = l;
  rep.predicted_bias =
      std::exp2((static_cast<double>(w) - static_cast<double>(h)) / 2.0);

  // Uniform flat support drawn from a wide alphabet, then hashed.
  std::unordered_set<DocumentId> picked;
  std::vector<DocumentId> support;
  support.reserve(H);
  while (support.size() < H) {
    auto cand = static_cast<DocumentId>(rng.uniform_below(kAlphabet));
    if (picked.insert(cand).second) support.push_back(cand);
  }
  rep.hash_a = rng.next_u64() | 1;
  rep.hash_b = rng.next_u64();
  auto hash = [&](DocumentId s) {
    return static_cast<std::uint32_t>(
        (rep.hash_a * static_cast<std::uint64_t>(s) + rep.hash_b) >> (64 - w));
  };

  std::vector<std::uint32_t> counts(cells, 0);
  for (auto s : support) ++counts[hash(s)];
  double uniform = std::ldexp(1.0, -static_cast<int>(w));
  rep.cell_mass.resize(cells);
  for (std::uint32_t c = 0; c < cells; ++c) {
    rep.cell_mass[c] = static_cast<double>(counts[c]) / static_cast<double>(H);
    double dev = std::fabs(rep.cell_mass[c] - uniform);
    rep.exact_bias_max = std::max(rep.exact_bias_max, dev);
    rep.exact_bias_tv += dev / 2.0;
  }
  rep.sqrt_l_times_tv = std::sqrt(static_cast<double>(l)) * rep.exact_bias_tv;

  // Exact l-fold distance over cell-count vectors of the two product laws.
  {
    std::vector<std::uint32_t> n(cells, 0);
    double acc = 0;
    auto rec = [&](auto&& self, std::uint32_t cell, std::uint64_t left) -> void {
      if (cell + 1 == cells) {
        n[cell] = static_cast<std::uint32_t>(left);
        double coef = detail::log_multinomial_coef(l, n);
        double logd = 0;
        bool dead = false;
        for (std::uint32_t c = 0; c < cells; ++c) {
          if (n[c] == 0) continue;
          if (rep.cell_mass[c] == 0) {
            dead = true;
            break;
          }
          logd += n[c] * std::log(rep.cell_mass[c]);
        }
        double pd = dead ? 0.0 : std::exp(coef + logd);
        double pe = std::exp(coef + static_cast<double>(l) * std::log(uniform));
        acc += std::fabs(pd - pe);
        return;
      }
      for (std::uint64_t take = 0; take <= left; ++take) {
        n[cell] = static_cast<std::uint32_t>(take);
        self(self, cell + 1, left - take);
      }
    };
    rec(rec, 0, l);
    rep.lfold_tv_exact = acc / 2.0;
  }

  // Monte-Carlo cross-check on the same statistic: count vectors pack into
  // 6 bits per cell (l <= 32 fits), tallied sparsely as a signed difference.
  {
    std::unordered_map<std::uint64_t, std::int64_t> diff;
    std::vector<std::uint32_t> n(cells, 0);
    auto sample_counts = [&](RandomSource& r, bool channel_side) {
      std::fill(n.begin(), n.end(), 0u);
      for (std::uint64_t i = 0; i < l; ++i) {
        std::uint32_t c = channel_side
                              ? hash(support[r.uniform_below(H)])
                              : static_cast<std::uint32_t>(r.bits(w));
        ++n[c];
      }
      std::uint64_t idx = 0;
      for (std::uint32_t c = 0; c < cells; ++c) idx = idx << 6 | n[c];
      return idx;
    };
    for (std::uint64_t t = 0; t < mc_trials; ++t) {
      diff[sample_counts(rng, true)] += 1;
      diff[sample_counts(rng, false)] -= 1;
    }
    std::int64_t abs_sum = 0;
    for (auto& [cell, d] : diff) abs_sum += std::llabs(d);
    double comb = 1;  // C(l + cells - 1, cells - 1) distinct count vectors
    for (std::uint32_t c = 1; c < cells; ++c)
      comb *= static_cast<double>(l + c) / static_cast<double>(c);
    rep.lfold_tv_mc = static_cast<double>(abs_sum) /
                      (2.0 * static_cast<double>(mc_trials));
    rep.lfold_mc_trials = mc_trials;
    rep.lfold_mc_bias_bound = (comb - 1.0) / (2.0 * static_cast<double>(mc_trials));
  }
  return rep;
}

// Runtime collision-aborting hybrids of the bounded encoder, for Monte-Carlo
// cross-checks of the exact enumerations. The first mode tests a provided
// symbol function, the second a fresh coin per logged draw, the third drops
// the log and the abort entirely.
enum class HybridMode { se2, se3, se4 };

struct HybridOutcome {
  bool failed = false;
  std::vector<DocumentId> stegotext;
};

inline HybridOutcome hybrid_encode(HybridMode mode, SymbolFunction* f,
                                   const std::vector<std::uint32_t>& symbols,
                                   const History& history, std::uint64_t k,
                                   const ChannelModel& chan, unsigned w,
                                   RandomSource& rng) {
  if (mode == HybridMode::se2) {
    if (!f) throw InvalidArgument("explicit-function hybrid needs a symbol function");
    if (f->width() != w) throw InvalidArgument("symbol function width mismatch");
  }
  detail::check_symbol_range(symbols, w);
  if (k < 1) throw InvalidArgument("draw budget must be at least 1");
  chan.validate_history(history);

  HybridOutcome out;
  std::unordered_set<DocumentId> logged;
  std::uint32_t idx = static_cast<std::uint32_t>(history.size());
  for (auto m : symbols) {
    ++idx;
    std::uint64_t j = 0;
    for (;;) {
      DocumentId s = chan.sample_at_index(idx, rng);
      ++j;
      if (mode != HybridMode::se4) {
        if (logged.count(s) || j == k + 1) {
          out.failed = true;
          out.stegotext.clear();
          return out;
        }
        logged.insert(s);
      }
      bool accept = mode == HybridMode::se2 ? f->eval(0, s) == m
                                            : rng.bits(w) == m;
      if (accept) {
        out.stegotext.push_back(s);
        break;
      }
    }
  }
  return out;
}

}  // namespace stego
