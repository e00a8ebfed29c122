// Acceptance gate. Each check prints exactly one PASS or FAIL line with the
// measured values and its pinned tolerance; the process exits nonzero if any
// check fails. Every expected constant here was computed independently of the
// library (high precision arithmetic) and frozen; nothing is derived from the
// code under test at runtime.

#include <boost/math/distributions/chi_squared.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "stego/bounds.hpp"
#include "stego/channel.hpp"
#include "stego/codes.hpp"
#include "stego/enumeration.hpp"
#include "stego/flat_channel.hpp"
#include "stego/harness.hpp"
#include "stego/prf.hpp"
#include "stego/rng.hpp"
#include "stego/stats.hpp"
#include "stego/stf.hpp"
#include "stego/stl.hpp"

namespace {

using namespace stego;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream os;
  os.precision(prec);
  os << v;
  return os.str();
}

constexpr const char* kKeyHex =
    "8f3a5c6d9e0b1a2c4d5e6f708192a3b4c5d6e7f8091a2b3c4d5e6f7081920a3b";
constexpr const char* kChanSeedHex =
    "2b7e151628aed2a6abf7158809cf4f3c762e7160f38b4da56a784d9045190cfe";

// 1. One hundred random flat channels with S <= 4096: enumerating membership
// over the whole alphabet must find exactly H documents, and the root
// interval query must agree. Zero tolerance.
Outcome check_support_enumeration() {
  RandomSource rng(101);
  for (int t = 0; t < 100; ++t) {
    auto S = static_cast<std::uint32_t>(2 + rng.uniform_below(4095));
    auto H = static_cast<std::uint32_t>(1 + rng.uniform_below(S));
    FlatChannel chan(FlatChannelSeed::random(rng), S, H);
    std::uint64_t i = 1 + rng.uniform_below(64);
    std::uint64_t members = 0;
    for (std::uint32_t s = 0; s < S; ++s)
      if (chan.insupp(i, s)) ++members;
    if (members != H || chan.interval_sum(i, 0, S - 1) != H)
      return {false, "trial " + std::to_string(t) + ": S=" + std::to_string(S) +
                         " H=" + std::to_string(H) + " found " +
                         std::to_string(members)};
  }
  return {true, "100 channels, exact support size every time"};
}

// 2. Interval counts are additive: count(a,b) = count(a,m) + count(m+1,b) for
// ten thousand random splits. Zero tolerance.
Outcome check_interval_additivity() {
  RandomSource rng(202);
  const int kChannels = 5;
  const int kSplits = 2000;
  for (int c = 0; c < kChannels; ++c) {
    auto S = static_cast<std::uint32_t>(2 + rng.uniform_below(4095));
    auto H = static_cast<std::uint32_t>(1 + rng.uniform_below(S));
    FlatChannel chan(FlatChannelSeed::random(rng), S, H);
    std::uint64_t i = 1 + rng.uniform_below(64);
    for (int t = 0; t < kSplits; ++t) {
      auto a = static_cast<std::uint32_t>(rng.uniform_below(S - 1));
      auto b = static_cast<std::uint32_t>(a + 1 + rng.uniform_below(S - 1 - a));
      auto m = static_cast<std::uint32_t>(a + rng.uniform_below(b - a));
      std::uint64_t whole = chan.interval_sum(i, a, b);
      std::uint64_t parts =
          chan.interval_sum(i, a, m) + chan.interval_sum(i, m + 1, b);
      if (whole != parts)
        return {false, "split [" + std::to_string(a) + "," + std::to_string(m) +
                           "," + std::to_string(b) + "] on channel " +
                           std::to_string(c) + ": " + std::to_string(whole) +
                           " != " + std::to_string(parts)};
    }
  }
  return {true, "10000 random splits across 5 channels, all exact"};
}

// 3. With a uniform support of 8 documents and width-1 symbols, the exact
// two-symbol output distribution of the stateful system must equal the
// channel itself: total absolute deviation at most 1e-9.
Outcome check_stf_exact_output() {
  constexpr double kTol = 1e-9;
  const double uniform = 1.0 / 64.0;
  double worst = 0;
  for (std::uint32_t m1 = 0; m1 < 2; ++m1)
    for (std::uint32_t m2 = 0; m2 < 2; ++m2) {
      auto dist = stf_output_exact(8, 1, {m1, m2}, 1e-13);
      if (dist.probs.size() != 64) return {false, "wrong cell count"};
      double mass = dist.residual;
      for (double p : dist.probs) mass += std::fabs(p - uniform);
      worst = std::max(worst, mass);
    }
  if (worst > kTol) return {false, "total deviation " + fmt(worst)};
  return {true, "max total deviation " + fmt(worst, 3) + " <= 1e-9"};
}

// 4. Random-function stateful system at h=8, w=2 over 1e5 symbols: the
// decoded-symbol error rate stays within three binomial sigma of 2^-6.
Outcome check_stf_error_rate() {
  RandomSource rng(404);
  const std::uint64_t n = 100000;
  auto st = stf_error_channel_stats(n, 8, 2, rng);
  const double bound = std::ldexp(1.0, -6);
  const double gate =
      bound + 3 * std::sqrt(bound * (1 - bound) / static_cast<double>(n));
  bool ok = st.error_rate <= gate;
  return {ok, "rate " + fmt(st.error_rate, 5) + " (errors " +
                  std::to_string(st.errors) + "/" + std::to_string(n) +
                  "), gate " + fmt(gate, 5)};
}

// 5. At h=9, w=3 the wrong decoded symbols must be uniform over the 2^w - 1
// incorrect values: at least 2000 error events and chi-square p above 0.01.
Outcome check_wrong_symbol_uniformity() {
  RandomSource rng(505);
  auto st = stf_error_channel_stats(160000, 9, 3, rng);
  bool ok = st.errors >= 2000 && st.wrong_uniform_p > 0.01;
  return {ok, std::to_string(st.errors) + " error events (need >= 2000), " +
                  "uniformity p " + fmt(st.wrong_uniform_p, 4) + " (need > 0.01)"};
}

// Chi-square fit of observed per-symbol draw counts against Geometric(q)
// over the first 20 buckets plus a pooled tail. Far-tail buckets whose
// expected count falls below 5 are pooled so the statistic stays valid.
double geometric_chi_square_p(const std::vector<std::uint64_t>& per, double q) {
  constexpr int kBuckets = 20;
  const double n = static_cast<double>(per.size());
  std::vector<double> expected(kBuckets + 1, 0.0);
  std::vector<double> observed(kBuckets + 1, 0.0);
  for (int j = 1; j <= kBuckets; ++j)
    expected[j - 1] = n * q * std::pow(1.0 - q, j - 1);
  expected[kBuckets] = n * std::pow(1.0 - q, kBuckets);
  for (auto c : per) {
    if (c >= 1 && c <= kBuckets)
      observed[c - 1] += 1;
    else
      observed[kBuckets] += 1;
  }
  int last = kBuckets;
  while (last > 0 && expected[last] < 5.0) {
    expected[last - 1] += expected[last];
    observed[last - 1] += observed[last];
    --last;
  }
  double stat = 0;
  for (int j = 0; j <= last; ++j) {
    double d = observed[j] - expected[j];
    stat += d * d / expected[j];
  }
  boost::math::chi_squared dist(last);
  return boost::math::cdf(boost::math::complement(dist, stat));
}

// 6. Rejection sampling cost: over 1e4 symbols per width the mean number of
// draws lands within 5 percent of 2^w and the draw-count histogram fits
// Geometric(2^-w) with p above 0.01 for w in {1,2,3,4}.
Outcome check_sample_count_distribution() {
  const std::uint64_t n = 10000;
  MemorylessChannel chan = MemorylessChannel::uniform(1u << 20);
  std::string detail;
  for (unsigned w = 1; w <= 4; ++w) {
    RandomSource rng(600 + w);
    RandomFunctionOracle f(w, rng.spawn(1));
    std::vector<std::uint32_t> symbols(n);
    for (auto& s : symbols)
      s = static_cast<std::uint32_t>(rng.uniform_below(1u << w));
    StfState state;
    std::vector<std::uint64_t> per;
    stf_encode_symbols(f, symbols, {}, state, chan, rng, &per);
    double mean =
        std::accumulate(per.begin(), per.end(), 0.0) / static_cast<double>(n);
    double target = std::ldexp(1.0, static_cast<int>(w));
    if (std::fabs(mean / target - 1.0) > 0.05)
      return {false, "w=" + std::to_string(w) + ": mean " + fmt(mean, 4) +
                         " not within 5% of " + fmt(target, 4)};
    double p = geometric_chi_square_p(per, std::ldexp(1.0, -static_cast<int>(w)));
    if (p <= 0.01)
      return {false, "w=" + std::to_string(w) + ": geometric fit p " + fmt(p, 4)};
    if (!detail.empty()) detail += ", ";
    detail += "w" + std::to_string(w) + " mean " + fmt(mean, 4) + " p " + fmt(p, 2);
  }
  return {true, detail};
}

// 7. Bounded stateless system at h=8, w=1, k=64 on a true-random flat
// channel: of 1e4 four-symbol messages at most 3 may fail to round trip.
Outcome check_stl_reliability() {
  RandomSource rng(707);
  RandomSource chan_rng = rng.spawn(1);
  TrueRandomFlatChannel chan(1024, 256, 4, chan_rng);
  KeyedSymbolFunction f(StegoKey::from_hex(kKeyHex), PrfDomain::stl, 1);
  std::uint64_t failures = 0;
  for (std::uint64_t t = 0; t < 10000; ++t) {
    std::vector<std::uint32_t> msg(4);
    for (auto& m : msg) m = static_cast<std::uint32_t>(rng.bits(1));
    auto stegotext = stl_encode_symbols(f, msg, {}, 64, chan, rng);
    if (stl_decode_symbols(f, stegotext) != msg) ++failures;
  }
  return {failures <= 3,
          std::to_string(failures) + " failures in 10000 messages (allow 3)"};
}

// 8. Exact collision insecurity at H=8, w=1, l=2, k=4: the diagonal mass of
// the enumerated two-symbol output deviates from the channel's 1/H by no
// more than the closed-form bound, and the symmetric recurrence agrees with
// the path enumeration to 1e-12.
Outcome check_stl_collision_bound() {
  const std::uint32_t H = 8;
  const std::uint64_t k = 4;
  const double bound = stl_insecurity_bound(3, 1, 2, 4);
  double worst_dev = 0, worst_gap = 0;
  for (std::uint32_t m1 = 0; m1 < 2; ++m1)
    for (std::uint32_t m2 = 0; m2 < 2; ++m2) {
      auto joint = stl_output_exact(H, 1, {m1, m2}, k);
      double coll = 0;
      for (std::uint32_t s = 0; s < H; ++s) coll += joint.probs[s * H + s];
      worst_dev = std::max(worst_dev, std::fabs(coll - 1.0 / H));
      double rec = stl_collision_exact_symmetric(H, k, m1, m2);
      worst_gap = std::max(worst_gap, std::fabs(coll - rec));
    }
  bool ok = worst_dev <= bound && worst_gap <= 1e-12;
  return {ok, "max |Pr[s1=s2] - 1/8| = " + fmt(worst_dev, 6) + " <= bound " +
                  fmt(bound, 4) + ", enumeration vs recurrence gap " +
                  fmt(worst_gap, 3)};
}

// 9. Hybrid chain at support 8, w=1, l=2, k=3: the random-function system
// with a global log equals the fresh-coin variant exactly, dropping the
// abort recovers the channel, and the real system sits within the abort
// probability of the channel in total variation.
Outcome check_hybrid_chain() {
  const std::uint32_t sup = 8;
  const std::uint64_t k = 3;
  constexpr double kExactTol = 1e-12;
  constexpr double kChannelTol = 1e-9;
  const double fail_bound = se2_fail_bound(3, 1, 2, 3);
  const double uniform = 1.0 / 64.0;
  double worst23 = 0, worst4 = 0, worst_fail = 0, worst_tv_slack = 0;
  for (std::uint32_t m1 = 0; m1 < 2; ++m1)
    for (std::uint32_t m2 = 0; m2 < 2; ++m2) {
      std::vector<std::uint32_t> m{m1, m2};
      auto se2 = se2_output_exact(sup, 1, m, k);
      auto se3 = se3_output_exact(sup, 1, m, k);
      auto se4 = se4_output_exact(sup, 1, m);
      auto stl = stl_output_exact(sup, 1, m, k);
      for (std::size_t c = 0; c < se2.probs.size(); ++c)
        worst23 = std::max(worst23, std::fabs(se2.probs[c] - se3.probs[c]));
      worst23 = std::max(worst23, std::fabs(se2.fail_prob - se3.fail_prob));
      double mass4 = se4.residual;
      for (double p : se4.probs) mass4 += std::fabs(p - uniform);
      worst4 = std::max(worst4, mass4);
      worst_fail = std::max(worst_fail, se2.fail_prob - fail_bound);
      double tv = tv_distance(stl.probs, se4.probs);
      worst_tv_slack = std::max(worst_tv_slack, tv - se2.fail_prob);
    }
  bool ok = worst23 <= kExactTol && worst4 <= kChannelTol &&
            worst_fail <= kExactTol && worst_tv_slack <= kExactTol;
  return {ok, "log vs coin gap " + fmt(worst23, 3) + ", no-abort vs channel " +
                  fmt(worst4, 3) + ", tv slack " + fmt(worst_tv_slack, 3) +
                  ", fail <= " + fmt(fail_bound, 4)};
}

// 10. Low-weight counting: brute enumeration equals the closed form for
// l <= 3, N <= 12, and the tail inequality holds strictly on the whole
// supported grid (N <= 62, all l, w <= 8).
Outcome check_low_weight_counting() {
  for (unsigned N = 1; N <= 12; ++N)
    for (unsigned l = 1; l <= std::min(N, 3u); ++l)
      if (count_low_weight_enumerated(l, N) != count_low_weight(l, N))
        return {false, "count mismatch at N=" + std::to_string(N) +
                           " l=" + std::to_string(l)};
  std::uint64_t checks = 0;
  for (unsigned N = 1; N <= 62; ++N)
    for (unsigned l = 1; l <= N; ++l)
      for (unsigned w = 1; w <= 8; ++w) {
        try {
          lemma_tail_bound(N, l, w);
          ++checks;
        } catch (const StegoError&) {
          return {false, "tail bound violated at N=" + std::to_string(N) +
                             " l=" + std::to_string(l) +
                             " w=" + std::to_string(w)};
        }
      }
  return {true, "enumeration exact for l<=3, N<=12; inequality holds at all " +
                    std::to_string(checks) + " grid points"};
}

// 11. Query complexity floor: for both systems and w in {1,2,3} the measured
// mean draws per symbol must reach (2^w/e)(1/2 - rho - eps R), with the
// non-support rate exactly zero across at least 1e6 output documents on a
// pseudorandom flat channel.
Outcome check_query_lower_bound() {
  StegoKey key = StegoKey::from_hex(kKeyHex);
  FlatChannel chan(FlatChannelSeed::from_hex(kChanSeedHex), 1024, 256);
  const std::uint64_t msgs = 21000, l = 8, k = 64;
  std::uint64_t total_docs = 0;
  std::string detail;
  int idx = 0;
  for (auto sys : {SystemKind::stf, SystemKind::stl})
    for (unsigned w = 1; w <= 3; ++w) {
      RandomSource rng(1100 + idx++);
      auto rep = query_counting_run(sys, key, w, k, l, msgs, chan, chan, 1024,
                                    256, rng);
      if (!rep.bound_holds)
        return {false, rep.system + " w=" + std::to_string(w) + ": mean " +
                           fmt(rep.mean_queries_per_symbol, 5) +
                           " below bound " + fmt(rep.bound, 5)};
      if (rep.eps_hat != 0.0)
        return {false, rep.system + " w=" + std::to_string(w) +
                           ": non-support rate " + fmt(rep.eps_hat)};
      total_docs += rep.output_documents;
      if (!detail.empty()) detail += ", ";
      detail += rep.system + "/w" + std::to_string(w) + " " +
                fmt(rep.mean_queries_per_symbol, 3) + ">=" + fmt(rep.bound, 3);
    }
  if (total_docs < 1000000)
    return {false, "only " + std::to_string(total_docs) + " output documents"};
  return {true, detail + "; " + std::to_string(total_docs) +
                    " documents, zero non-support"};
}

// 12. Stateless variant with a global log at h=10, w=1, l=8: over 1e4
// messages the failure rate stays within three sigma of the l^2 2^{w-h}
// bound, and the Bloom-filter log sized at the derived bits per entry stays
// within three sigma of twice that bound.
Outcome check_stateless_variant() {
  RandomSource rng(1212);
  RandomSource chan_rng = rng.spawn(1);
  TrueRandomFlatChannel chan(2048, 1024, 8, chan_rng);
  const std::uint64_t msgs = 10000, l = 8;
  const double bound = stateless_stf_unreliability_bound(10, 1, 8);
  const double bpe = bloom_bits_per_entry(10, 1, 8);
  auto run = [&](bool bloom) {
    std::uint64_t failures = 0;
    for (std::uint64_t t = 0; t < msgs; ++t) {
      RandomFunctionOracle f(1, rng.spawn((bloom ? 2000000 : 1000000) + t));
      std::vector<std::uint32_t> msg(l);
      for (auto& m : msg) m = static_cast<std::uint32_t>(rng.bits(1));
      PrivateSampleLog log = bloom ? PrivateSampleLog::bloom_for_entries(16, bpe)
                                   : PrivateSampleLog::exact();
      auto st = stf_encode_stateless_symbols(f, msg, {}, chan, rng, log);
      if (stf_decode_stateless_symbols(f, st) != msg) ++failures;
    }
    return static_cast<double>(failures) / static_cast<double>(msgs);
  };
  double rate_exact = run(false);
  double rate_bloom = run(true);
  const double n = static_cast<double>(msgs);
  const double gate_exact = bound + 3 * std::sqrt(bound * (1 - bound) / n);
  const double b2 = 2 * bound;
  const double gate_bloom = b2 + 3 * std::sqrt(b2 * (1 - b2) / n);
  bool ok = rate_exact <= gate_exact && rate_bloom <= gate_bloom;
  return {ok, "exact-set rate " + fmt(rate_exact, 4) + " <= " +
                  fmt(gate_exact, 4) + ", bloom rate " + fmt(rate_bloom, 4) +
                  " <= " + fmt(gate_bloom, 4) + " at " + fmt(bpe, 4) +
                  " bits/entry"};
}

// 13. Public hash replacement at h=6, w=2: the median worst-case symbol bias
// over 100 hash draws lands within a factor of 4 of 2^{(w-h)/2}, inclusive.
Outcome check_public_hash_bias() {
  RandomSource base(1313);
  std::vector<double> biases;
  biases.reserve(100);
  for (std::uint64_t s = 0; s < 100; ++s) {
    RandomSource r = base.spawn(s);
    biases.push_back(public_hash_bias_experiment(6, 2, 1, 100, r).exact_bias_max);
  }
  std::sort(biases.begin(), biases.end());
  double median = (biases[49] + biases[50]) / 2;
  const double predicted = std::exp2((2.0 - 6.0) / 2.0);
  bool ok = median >= predicted / 4 && median <= predicted * 4;
  return {ok, "median bias " + fmt(median, 4) + " vs predicted " +
                  fmt(predicted, 4) + " (window [" + fmt(predicted / 4, 4) +
                  ", " + fmt(predicted * 4, 4) + "])"};
}

// 14. Bound calculators reproduce frozen reference values to 6 significant
// figures; counting calculators are exact.
Outcome check_bound_calculators() {
  struct Golden {
    const char* name;
    double got;
    double want;
  };
  auto cap28 = stf_capacity_bound(2, 8);
  auto cap110 = stf_capacity_bound(1, 10);
  auto lem422 = lemma_tail_bound(4, 2, 2);
  auto lem1234 = lemma_tail_bound(12, 3, 4);
  const Golden goldens[] = {
      {"insecurity(8,1,2,16)", stl_insecurity_bound(8, 1, 2, 16),
       0.03131103515625},
      {"insecurity(3,1,2,4)", stl_insecurity_bound(3, 1, 2, 4), 1.25},
      {"insecurity(10,2,4,32)", stl_insecurity_bound(10, 2, 4, 32),
       0.21174111940576507},
      {"fail(3,1,2,3)", se2_fail_bound(3, 1, 2, 3), 0.75},
      {"fail(8,1,2,16)", se2_fail_bound(8, 1, 2, 16), 0.015655517578125},
      {"unreliability(8,1,4,64)", stl_unreliability_bound(8, 1, 4, 64),
       4.5014080019036085e-7},
      {"unreliability(9,3,2,128)", stl_unreliability_bound(9, 3, 2, 128),
       0.29372114747555191},
      {"symbol_error(8,2)", stf_symbol_error_prob(8, 2), 0.01171875},
      {"symbol_error(6,2)", stf_symbol_error_prob(6, 2), 0.046875},
      {"stateless(10,1,8)", stateless_stf_unreliability_bound(10, 1, 8), 0.125},
      {"bloom_bpe(10,1,8)", bloom_bits_per_entry(10, 1, 8),
       8.6561702453337804},
      {"capacity(2,8)", cap28.exact, 1.8894428687408612},
      {"capacity_lower(2,8)", cap28.lower_bound, 1.84375},
      {"capacity(1,10)", cap110.exact, 0.98882618127878047},
      {"capacity_lower(1,10)", cap110.lower_bound, 0.9765625},
      {"tail_exact(4,2,2)", lem422.exact_fraction, 0.375},
      {"tail_bound(4,2,2)", lem422.bound, 1.8472640247326626},
      {"tail_exact(12,3,4)", lem1234.exact_fraction, 0.0537109375},
      {"tail_bound(12,3,4)", lem1234.bound, 0.31383651442480731},
      {"queries(3,0,0,1)", lower_bound_queries(3, 0, 0, 1),
       1.4715177646857693},
      {"queries(1,.25,0,1)", lower_bound_queries(1, 0.25, 0, 1),
       0.18393972058572116},
      {"queries(2,.1,.001,4)", lower_bound_queries(2, 0.1, 0.001, 4),
       0.58272103481556464},
      {"queries_b(2,.1,.001,4,1e-4)",
       lower_bound_queries_bounded(2, 0.1, 0.001, 4, 0.0001),
       0.58198527593322175},
  };
  constexpr double kRelTol = 5e-7;
  for (const auto& g : goldens) {
    if (std::fabs(g.got / g.want - 1.0) >= kRelTol)
      return {false, std::string(g.name) + " = " + fmt(g.got, 12) + ", want " +
                         fmt(g.want, 12)};
  }
  struct Count {
    const char* name;
    std::uint64_t got;
    std::uint64_t want;
  };
  const Count counts[] = {
      {"low_weight(3,12)", count_low_weight(3, 12), 220ULL},
      {"low_weight(2,30)", count_low_weight(2, 30), 435ULL},
      {"low_weight(5,62)", count_low_weight(5, 62), 6471002ULL},
      {"low_weight(31,62)", count_low_weight(31, 62), 465428353255261088ULL},
  };
  for (const auto& c : counts) {
    if (c.got != c.want)
      return {false, std::string(c.name) + " = " + std::to_string(c.got) +
                         ", want " + std::to_string(c.want)};
  }
  return {true, "23 reference values to 6 s.f., 4 counts exact"};
}

}  // namespace

int main() {
  struct Entry {
    int id;
    const char* name;
    Outcome (*fn)();
  };
  const Entry entries[] = {
      {1, "support-enumeration", check_support_enumeration},
      {2, "interval-additivity", check_interval_additivity},
      {3, "stf-exact-output", check_stf_exact_output},
      {4, "stf-error-rate", check_stf_error_rate},
      {5, "wrong-symbol-uniformity", check_wrong_symbol_uniformity},
      {6, "sample-count-geometric", check_sample_count_distribution},
      {7, "stl-reliability", check_stl_reliability},
      {8, "stl-collision-bound", check_stl_collision_bound},
      {9, "hybrid-chain", check_hybrid_chain},
      {10, "low-weight-counting", check_low_weight_counting},
      {11, "query-lower-bound", check_query_lower_bound},
      {12, "stateless-variant", check_stateless_variant},
      {13, "public-hash-bias", check_public_hash_bias},
      {14, "bound-calculators", check_bound_calculators},
  };
  int failures = 0;
  auto suite_start = std::chrono::steady_clock::now();
  for (const auto& e : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = e.fn();
    } catch (const std::exception& ex) {
      o = {false, std::string("exception: ") + ex.what()};
    }
    auto dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                  .count();
    std::printf("%s %2d %-24s %s [%.1fs]\n", o.pass ? "PASS" : "FAIL", e.id,
                e.name, o.detail.c_str(), dt);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  auto total = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             suite_start)
                   .count();
  std::printf("%d/14 checks passed [%.1fs total]\n", 14 - failures, total);
  return failures == 0 ? 0 : 1;
}
