#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "stego/bounds.hpp"
#include "stego/channel.hpp"
#include "stego/enumeration.hpp"
#include "stego/harness.hpp"
#include "stego/prf.hpp"

using namespace stego;

TEST_CASE("stegotext weight sums first-occurrence positions") {
  std::vector<std::vector<DocumentId>> streams{{5, 3, 7}, {2, 9, 2}};
  REQUIRE(weight({3, 9}, streams) == 4);   // positions 2 and 2
  REQUIRE(weight({5, 2}, streams) == 2);   // both first draws
  REQUIRE(weight({7, 2}, streams) == 4);   // 3 + 1
  REQUIRE(weight({9}, streams, 2) == 2);   // single symbol against stream 2
  REQUIRE_THROWS_AS(weight({4, 2}, streams), StegoError);
  REQUIRE_THROWS_AS(weight({5, 2, 5}, streams), InvalidArgument);
  REQUIRE_THROWS_AS(weight({5}, streams, 0), InvalidArgument);

  DrawSequence replay(streams);
  REQUIRE(weight({3, 9}, replay) == 4);
}

TEST_CASE("support detector fires exactly on out-of-support documents") {
  RandomSource chan_rng(31);
  TrueRandomFlatChannel chan(64, 16, 4, chan_rng);
  std::vector<DocumentId> inside;
  for (std::uint64_t i = 1; i <= 3; ++i)
    inside.push_back(chan.enumerate_support(i).front());
  REQUIRE(!nonsupport_detector(chan, inside));

  DocumentId outsider = 0;
  while (chan.in_support(2, outsider)) ++outsider;
  std::vector<DocumentId> tampered = inside;
  tampered[1] = outsider;
  REQUIRE(nonsupport_detector(chan, tampered));
  REQUIRE_THROWS_AS(nonsupport_detector(chan, inside, 0), InvalidArgument);
}

TEST_CASE("reliability estimator reports failures with a Wilson interval") {
  RandomSource base(77);
  ReliabilityEstimate est = estimate_reliability(
      1000, base, [](std::uint64_t t, RandomSource&) { return t % 10 != 0; });
  REQUIRE(est.trials == 1000);
  REQUIRE(est.failures == 100);
  REQUIRE(est.failure_rate == Catch::Approx(0.1).epsilon(0));
  REQUIRE(est.failure_ci.lo <= 0.1);
  REQUIRE(est.failure_ci.hi >= 0.1);
  REQUIRE_THROWS_AS(estimate_reliability(
                        50, base, [](std::uint64_t, RandomSource&) {
                          return true;
                        }),
                    InvalidArgument);
}

TEST_CASE("total-variation estimators agree on a known pair") {
  std::vector<double> p{0.5, 0.5};
  std::vector<double> q{0.25, 0.75};
  TvEstimate exact = estimate_tv_distance_exact(p, q);
  REQUIRE(exact.exact);
  REQUIRE(exact.tv == Catch::Approx(0.25).epsilon(1e-15));
  REQUIRE(exact.bias_bound == 0.0);

  RandomSource rng(5150);
  TvEstimate mc = estimate_tv_distance_mc(
      2, 40000, [](RandomSource& r) { return r.bits(1); },
      [](RandomSource& r) { return r.uniform01() < 0.25 ? 0u : 1u; }, rng);
  REQUIRE(mc.tv == Catch::Approx(0.25).margin(0.03));
  REQUIRE(mc.cells == 2);
  REQUIRE(mc.trials == 40000);
  RandomSource rng2(1);
  auto unit = [](RandomSource& r) { return r.bits(1); };
  REQUIRE_THROWS_AS(estimate_tv_distance_mc(1, 100, unit, unit, rng2),
                    InvalidArgument);
}

TEST_CASE("induced error channel matches the ideal-function rate") {
  RandomSource rng(606);
  ErrorChannelStats st = stf_error_channel_stats(20000, 6, 1, rng);
  REQUIRE(st.symbols == 20000);
  REQUIRE(st.expected_rate == Catch::Approx(0.015625).epsilon(0));
  REQUIRE(st.bound_rate == Catch::Approx(0.03125).epsilon(0));
  // 4 sigma of the binomial rate at p = 1/64 over 20000 trials.
  REQUIRE(st.error_rate == Catch::Approx(st.expected_rate).margin(0.0035));
  REQUIRE(st.mean_samples == Catch::Approx(2.0).margin(0.1));
  REQUIRE(st.wrong_offset_hist.size() == 1);
  REQUIRE(st.wrong_offset_hist[0] == st.errors);
  REQUIRE(st.wrong_uniform_p == 1.0);  // a single cell carries no test
}

TEST_CASE("wrong symbols spread uniformly over the other values") {
  RandomSource rng(607);
  ErrorChannelStats st = stf_error_channel_stats(30000, 4, 2, rng);
  REQUIRE(st.expected_rate == Catch::Approx(0.1875).epsilon(0));
  REQUIRE(st.wrong_offset_hist.size() == 3);
  std::uint64_t histed = 0;
  for (auto c : st.wrong_offset_hist) histed += c;
  REQUIRE(histed == st.errors);
  REQUIRE(st.errors > 4000);
  REQUIRE(st.wrong_uniform_p > 1e-4);
}

TEST_CASE("query counting run satisfies the lower bound on both systems") {
  StegoKey key = StegoKey::from_hex("00112233445566778899aabbccddeeff");
  RandomSource chan_rng(91);
  TrueRandomFlatChannel chan(64, 32, 4, chan_rng);
  for (SystemKind sys : {SystemKind::stf, SystemKind::stl}) {
    RandomSource rng(sys == SystemKind::stf ? 1001 : 2002);
    QueryCountReport rep =
        query_counting_run(sys, key, 1, 16, 4, 200, chan, chan, 64, 32, rng);
    REQUIRE(rep.total_symbols == 800);
    REQUIRE(rep.output_documents == 800);
    REQUIRE(rep.nonsupport_documents == 0);
    REQUIRE(rep.eps_hat == 0.0);
    REQUIRE(rep.R == Catch::Approx(2.0).epsilon(0));
    // The fixed key makes per-slot acceptance mass Binomial(32,1/2)/32, so
    // the mean draw count sits near but not at 2; only a sane range holds.
    REQUIRE(rep.mean_queries_per_symbol > 1.5);
    REQUIRE(rep.mean_queries_per_symbol < 3.5);
    REQUIRE(rep.p50 >= 1.0);
    REQUIRE(rep.p99 >= rep.p90);
    REQUIRE(rep.bound_holds);
    REQUIRE(rep.system == (sys == SystemKind::stf ? "stf" : "stl"));
  }
  RandomSource rng(3);
  REQUIRE_THROWS_AS(query_counting_run(SystemKind::stl, key, 1, 16, 4, 10,
                                       chan, chan, 32, 32, rng),
                    InvalidArgument);
}

TEST_CASE("public-hash bias experiment reports consistent distances") {
  RandomSource rng(33);
  BiasExperimentReport rep = public_hash_bias_experiment(6, 2, 4, 20000, rng);
  REQUIRE(rep.cell_mass.size() == 4);
  double total = 0;
  double max_dev = 0;
  double tv1 = 0;
  for (double q : rep.cell_mass) {
    total += q;
    max_dev = std::max(max_dev, std::fabs(q - 0.25));
    tv1 += std::fabs(q - 0.25) / 2.0;
  }
  REQUIRE(total == Catch::Approx(1.0).epsilon(1e-12));
  REQUIRE(rep.exact_bias_max == Catch::Approx(max_dev).epsilon(1e-12));
  REQUIRE(rep.exact_bias_tv == Catch::Approx(tv1).epsilon(1e-12));
  REQUIRE(rep.predicted_bias == Catch::Approx(0.25).epsilon(0));
  REQUIRE(rep.hash_a % 2 == 1);
  // The count vector is a sufficient statistic, so the l-fold distance sits
  // between the single-symbol distance and l times it.
  REQUIRE(rep.lfold_tv_exact >= rep.exact_bias_tv - 1e-12);
  REQUIRE(rep.lfold_tv_exact <= 4.0 * rep.exact_bias_tv + 1e-12);
  REQUIRE(std::fabs(rep.lfold_tv_mc - rep.lfold_tv_exact) <=
          rep.lfold_mc_bias_bound + 0.04);
  REQUIRE_THROWS_AS(public_hash_bias_experiment(0, 2, 4, 200, rng),
                    InvalidArgument);
  REQUIRE_THROWS_AS(public_hash_bias_experiment(6, 4, 4, 200, rng),
                    InvalidArgument);
  REQUIRE_THROWS_AS(public_hash_bias_experiment(6, 2, 0, 200, rng),
                    InvalidArgument);
  REQUIRE_THROWS_AS(public_hash_bias_experiment(6, 2, 4, 50, rng),
                    InvalidArgument);
}

TEST_CASE("runtime hybrids track their exact enumerations") {
  MemorylessChannel chan = MemorylessChannel::uniform(4);
  const std::vector<std::uint32_t> msg{0};
  const std::uint64_t k = 2;
  const int trials = 30000;

  ExactJointDistribution ex2 = se2_output_exact(4, 1, msg, k);
  ExactJointDistribution ex4 = se4_output_exact(4, 1, msg);

  RandomSource rng(8080);
  for (HybridMode mode : {HybridMode::se2, HybridMode::se3, HybridMode::se4}) {
    std::vector<double> freq(4, 0.0);
    double fails = 0;
    for (int t = 0; t < trials; ++t) {
      RandomFunctionOracle f(1, rng.spawn(static_cast<std::uint64_t>(t) + 1));
      HybridOutcome o = hybrid_encode(mode, &f, msg, {}, k, chan, 1, rng);
      if (o.failed)
        fails += 1.0 / trials;
      else
        freq[o.stegotext.at(0)] += 1.0 / trials;
    }
    if (mode == HybridMode::se4) {
      REQUIRE(fails == 0.0);
      REQUIRE(tv_distance(freq, ex4.probs) < 0.015);
    } else {
      // The coin-testing variant is distributed identically to the
      // function-testing one, so both compare against the same enumeration.
      REQUIRE(fails == Catch::Approx(ex2.fail_prob).margin(0.015));
      REQUIRE(tv_distance(freq, ex2.probs) < 0.015);
    }
  }

  RandomSource rng2(11);
  REQUIRE_THROWS_AS(
      hybrid_encode(HybridMode::se2, nullptr, msg, {}, k, chan, 1, rng2),
      InvalidArgument);
  RandomFunctionOracle wide(2, rng2.spawn(1));
  REQUIRE_THROWS_AS(
      hybrid_encode(HybridMode::se2, &wide, msg, {}, k, chan, 1, rng2),
      InvalidArgument);
}
