#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "stego/rng.hpp"
#include "stego/stats.hpp"

using namespace stego;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("chi-square p-values match closed forms") {
  // dof 1: p = erfc(sqrt(x/2)); dof 2: exp(-x/2); dof 4: exp(-x/2)(1 + x/2).
  REQUIRE_THAT(chi_square_pvalue(1.0, 1), WithinRel(0.31731050786291404, 1e-12));
  REQUIRE_THAT(chi_square_pvalue(2.0, 2), WithinRel(0.36787944117144233, 1e-12));
  REQUIRE_THAT(chi_square_pvalue(4.0, 4), WithinRel(0.4060058497098381, 1e-12));
  REQUIRE_THAT(chi_square_pvalue(2.0, 3), WithinRel(0.5724067044708798, 1e-12));
  REQUIRE_THAT(chi_square_pvalue(11.07, 5), WithinRel(0.05000961862240548, 1e-12));
  REQUIRE(chi_square_pvalue(0.0, 3) == 1.0);
  REQUIRE_THROWS_AS(chi_square_pvalue(1.0, 0), InvalidArgument);
}

TEST_CASE("chi-square test computes the Pearson statistic") {
  std::vector<std::uint64_t> counts{30, 20, 25, 25};
  auto r = chi_square_uniform(counts);
  REQUIRE_THAT(r.statistic, WithinAbs(2.0, 1e-12));
  REQUIRE(r.dof == 3.0);
  REQUIRE_THAT(r.p_value, WithinRel(0.5724067044708798, 1e-12));
}

TEST_CASE("chi-square test accepts unnormalized expected weights") {
  std::vector<std::uint64_t> counts{30, 20, 25, 25};
  auto a = chi_square_test(counts, {1.0, 1.0, 1.0, 1.0});
  auto b = chi_square_test(counts, {0.25, 0.25, 0.25, 0.25});
  REQUIRE_THAT(a.statistic, WithinAbs(b.statistic, 1e-12));
}

TEST_CASE("zero-expectation cells force p to zero only when occupied") {
  std::vector<std::uint64_t> clean{50, 50, 0};
  REQUIRE(chi_square_test(clean, {0.5, 0.5, 0.0}).p_value > 0.05);
  std::vector<std::uint64_t> dirty{50, 50, 1};
  REQUIRE(chi_square_test(dirty, {0.5, 0.5, 0.0}).p_value == 0.0);
}

TEST_CASE("two-sample chi-square accepts identical generators") {
  RandomSource rng(11);
  std::vector<std::uint64_t> a(8, 0), b(8, 0);
  for (int i = 0; i < 40000; ++i) {
    ++a[rng.uniform_below(8)];
    ++b[rng.uniform_below(8)];
  }
  REQUIRE(chi_square_two_sample(a, b).p_value > 0.001);
}

TEST_CASE("two-sample chi-square rejects disjoint generators") {
  std::vector<std::uint64_t> a{1000, 0, 0, 1000};
  std::vector<std::uint64_t> b{0, 1000, 1000, 0};
  REQUIRE(chi_square_two_sample(a, b).p_value < 1e-10);
}

TEST_CASE("wilson interval brackets the empirical proportion") {
  auto iv = wilson_interval(50, 100);
  REQUIRE_THAT(iv.lo, WithinRel(0.4038315303659956, 1e-12));
  REQUIRE_THAT(iv.hi, WithinRel(0.5961684696340044, 1e-12));
  auto zero = wilson_interval(0, 100);
  REQUIRE(zero.lo >= 0.0);
  REQUIRE(zero.lo < 1e-12);
  REQUIRE(zero.hi > 0.0);
  auto one = wilson_interval(100, 100);
  REQUIRE(one.hi <= 1.0);
  REQUIRE(one.hi > 1.0 - 1e-12);
  REQUIRE(one.lo < 1.0);
  REQUIRE_THROWS_AS(wilson_interval(1, 0), InvalidArgument);
}

TEST_CASE("serial correlation flags alternation and passes independence") {
  std::vector<double> alternating;
  for (int i = 0; i < 400; ++i) alternating.push_back(i % 2 == 0 ? 1.0 : -1.0);
  auto bad = serial_correlation(alternating);
  REQUIRE(bad.r < -0.9);
  REQUIRE(bad.p_value < 1e-10);

  RandomSource rng(13);
  std::vector<double> indep;
  for (int i = 0; i < 20000; ++i) indep.push_back(rng.uniform01());
  REQUIRE(serial_correlation(indep).p_value > 0.001);

  std::vector<double> constant(100, 3.0);
  auto flat = serial_correlation(constant);
  REQUIRE(flat.r == 0.0);
  REQUIRE(flat.p_value == 1.0);
}

TEST_CASE("geometric chi-square accepts true geometric draws") {
  RandomSource rng(17);
  double p = 0.25;
  std::vector<std::uint64_t> draws;
  for (int i = 0; i < 20000; ++i) {
    std::uint64_t d = 1;
    while (rng.uniform01() >= p) ++d;
    draws.push_back(d);
  }
  REQUIRE(chi_square_geometric(draws, p, 20).p_value > 0.001);
}

TEST_CASE("geometric chi-square rejects a constant sampler") {
  std::vector<std::uint64_t> draws(5000, 4);
  REQUIRE(chi_square_geometric(draws, 0.25, 20).p_value < 1e-10);
}
