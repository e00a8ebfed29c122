#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "stego/common.hpp"

namespace stego {

// Upper-tail p-value of the chi-square distribution.
inline double chi_square_pvalue(double statistic, double dof) {
  if (dof <= 0) throw InvalidArgument("chi-square dof must be positive");
  if (statistic <= 0) return 1.0;
  boost::math::chi_squared dist(dof);
  return boost::math::cdf(boost::math::complement(dist, statistic));
}

struct ChiSquareResult {
  double statistic = 0.0;
  double dof = 0.0;
  double p_value = 1.0;
};

// Pearson test of observed counts against expected probabilities (which are
// normalized here). Cells with zero expectation must have zero counts.
inline ChiSquareResult chi_square_test(const std::vector<std::uint64_t>& counts,
                                       const std::vector<double>& expected_probs) {
  if (counts.size() != expected_probs.size() || counts.size() < 2)
    throw InvalidArgument("chi-square needs >=2 matching cells");
  double total = 0.0, psum = 0.0;
  for (auto c : counts) total += static_cast<double>(c);
  for (auto p : expected_probs) {
    if (p < 0) throw InvalidArgument("negative expected probability");
    psum += p;
  }
  if (total <= 0 || psum <= 0) throw InvalidArgument("empty chi-square input");
  ChiSquareResult r;
  for (std::size_t i = 0; i < counts.size(); ++i) {
    double exp_i = total * expected_probs[i] / psum;
    double obs_i = static_cast<double>(counts[i]);
    if (exp_i == 0.0) {
      if (obs_i != 0.0) return {1e300, static_cast<double>(counts.size() - 1), 0.0};
      continue;
    }
    r.statistic += (obs_i - exp_i) * (obs_i - exp_i) / exp_i;
  }
  r.dof = static_cast<double>(counts.size() - 1);
  r.p_value = chi_square_pvalue(r.statistic, r.dof);
  return r;
}

inline ChiSquareResult chi_square_uniform(const std::vector<std::uint64_t>& counts) {
  return chi_square_test(counts, std::vector<double>(counts.size(), 1.0));
}

// Two-sample chi-square for homogeneity of two histograms over the same cells.
inline ChiSquareResult chi_square_two_sample(const std::vector<std::uint64_t>& a,
                                             const std::vector<std::uint64_t>& b) {
  if (a.size() != b.size() || a.size() < 2)
    throw InvalidArgument("two-sample chi-square needs >=2 matching cells");
  double na = 0, nb = 0;
  for (auto v : a) na += static_cast<double>(v);
  for (auto v : b) nb += static_cast<double>(v);
  if (na == 0 || nb == 0) throw InvalidArgument("empty sample");
  ChiSquareResult r;
  double dof = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double row = static_cast<double>(a[i]) + static_cast<double>(b[i]);
    if (row == 0) continue;
    double ea = row * na / (na + nb);
    double eb = row * nb / (na + nb);
    r.statistic += (a[i] - ea) * (a[i] - ea) / ea + (b[i] - eb) * (b[i] - eb) / eb;
    dof += 1;
  }
  if (dof < 2) throw InvalidArgument("two-sample chi-square: fewer than 2 occupied cells");
  r.dof = dof - 1;
  r.p_value = chi_square_pvalue(r.statistic, r.dof);
  return r;
}

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Wilson score interval for a binomial proportion (z = 1.96 for 95%).
inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials,
                                double z = 1.959963984540054) {
  if (trials == 0) throw InvalidArgument("wilson_interval with zero trials");
  double n = static_cast<double>(trials);
  double p = static_cast<double>(successes) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2 * n)) / denom;
  double half = z / denom * std::sqrt(p * (1 - p) / n + z2 / (4 * n * n));
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

// Lag-1 serial correlation with a two-sided normal-approximation p-value
// (r*sqrt(n) is approximately standard normal under independence).
struct SerialCorrelation {
  double r = 0.0;
  double p_value = 1.0;
};

inline SerialCorrelation serial_correlation(const std::vector<double>& xs) {
  std::size_t n = xs.size();
  if (n < 3) throw InvalidArgument("serial correlation needs >=3 samples");
  double mean = 0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(n);
  double num = 0, den = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = xs[i] - mean;
    den += d * d;
    if (i + 1 < n) num += d * (xs[i + 1] - mean);
  }
  SerialCorrelation out;
  if (den == 0) return out;
  out.r = num / den;
  double zstat = std::fabs(out.r) * std::sqrt(static_cast<double>(n));
  out.p_value = std::erfc(zstat / std::sqrt(2.0));
  return out;
}

// Buckets a sample of positive draw counts as 1..max_bucket plus a merged
// tail cell, with Geometric(p) expectations; feeds chi_square_test.
inline ChiSquareResult chi_square_geometric(const std::vector<std::uint64_t>& draw_counts,
                                            double p, unsigned max_bucket) {
  if (p <= 0 || p >= 1) throw InvalidArgument("geometric parameter must be in (0,1)");
  if (max_bucket < 2) throw InvalidArgument("need at least 2 geometric buckets");
  std::vector<std::uint64_t> counts(max_bucket + 1, 0);
  for (auto d : draw_counts) {
    if (d == 0) throw InvalidArgument("draw count of zero");
    if (d <= max_bucket)
      ++counts[d - 1];
    else
      ++counts[max_bucket];
  }
  std::vector<double> probs(max_bucket + 1, 0.0);
  double tail = 1.0;
  for (unsigned j = 1; j <= max_bucket; ++j) {
    probs[j - 1] = std::pow(1 - p, j - 1) * p;
    tail -= probs[j - 1];
  }
  probs[max_bucket] = std::max(tail, 0.0);
  return chi_square_test(counts, probs);
}

}  // namespace stego
