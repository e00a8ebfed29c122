#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <cstring>
#include <vector>

#include "stego/common.hpp"
#include "stego/rng.hpp"

namespace stego {

// Byte stream behind a deviate. Consumption order is part of the contract:
// given the same stream, every sampler below reproduces the same value.
class DeviateSource {
 public:
  virtual ~DeviateSource() = default;
  virtual void fill(std::uint8_t* out, std::size_t n) = 0;
};

class RngDeviateSource final : public DeviateSource {
 public:
  explicit RngDeviateSource(RandomSource& rng) : rng_(&rng) {}

  void fill(std::uint8_t* out, std::size_t n) override {
    while (n > 0) {
      std::uint64_t u = rng_->next_u64();
      std::size_t take = n < 8 ? n : 8;
      std::memcpy(out, &u, take);
      out += take;
      n -= take;
    }
  }

 private:
  RandomSource* rng_;
};

// Unbiased integer in [0,n): draw exactly bitlen(n-1) bits, reject and
// redraw on overshoot. No modulo, so no bias.
inline mpz_class uniform_mpz_below(DeviateSource& src, const mpz_class& n) {
  if (n <= 0) throw InvalidArgument("uniform_mpz_below needs n >= 1");
  if (n == 1) return mpz_class(0);
  mpz_class nm1 = n - 1;
  std::size_t k = mpz_sizeinbase(nm1.get_mpz_t(), 2);
  std::vector<std::uint8_t> buf((k + 7) / 8);
  mpz_class u;
  for (;;) {
    src.fill(buf.data(), buf.size());
    mpz_import(u.get_mpz_t(), buf.size(), 1, 1, 1, 0, buf.data());
    mpz_fdiv_r_2exp(u.get_mpz_t(), u.get_mpz_t(), k);
    if (u < n) return u;
  }
}

inline double uniform01_from(DeviateSource& src) {
  std::uint8_t buf[8];
  src.fill(buf, 8);
  std::uint64_t u = 0;
  for (int i = 0; i < 8; ++i) u = (u << 8) | buf[i];
  return static_cast<double>(u >> 11) * 0x1.0p-53;
}

namespace detail {

inline long double lchoose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return -std::numeric_limits<long double>::infinity();
  return std::lgamma(static_cast<long double>(n) + 1.0L) -
         std::lgamma(static_cast<long double>(k) + 1.0L) -
         std::lgamma(static_cast<long double>(n - k) + 1.0L);
}

// Exact inverse CDF over hypergeometric weights N(x) = C(m_l,x) C(m_r,t-x):
// draw U uniform below C(m_l+m_r,t), walk x upward until the cumulative
// weight exceeds U. The recurrence steps are exact integer divisions by the
// binomial identities C(n,x+1)(x+1) = C(n,x)(n-x).
inline std::uint64_t hypergeom_exact(std::uint64_t m_l, std::uint64_t m_r,
                                     std::uint64_t t, std::uint64_t x_lo,
                                     std::uint64_t x_hi, DeviateSource& src) {
  mpz_class total;
  mpz_bin_uiui(total.get_mpz_t(), static_cast<unsigned long>(m_l + m_r),
               static_cast<unsigned long>(t));
  mpz_class u = uniform_mpz_below(src, total);

  mpz_class weight, tmp;
  mpz_bin_uiui(weight.get_mpz_t(), static_cast<unsigned long>(m_l),
               static_cast<unsigned long>(x_lo));
  mpz_bin_uiui(tmp.get_mpz_t(), static_cast<unsigned long>(m_r),
               static_cast<unsigned long>(t - x_lo));
  weight *= tmp;

  std::uint64_t x = x_lo;
  mpz_class cum = weight;
  while (cum <= u && x < x_hi) {
    mpz_mul_ui(weight.get_mpz_t(), weight.get_mpz_t(),
               static_cast<unsigned long>(m_l - x));
    mpz_divexact_ui(weight.get_mpz_t(), weight.get_mpz_t(),
                    static_cast<unsigned long>(x + 1));
    mpz_mul_ui(weight.get_mpz_t(), weight.get_mpz_t(),
               static_cast<unsigned long>(t - x));
    mpz_divexact_ui(weight.get_mpz_t(), weight.get_mpz_t(),
                    static_cast<unsigned long>(m_r - t + x + 1));
    ++x;
    cum += weight;
  }
  return x;
}

// Log-space fallback for intervals too wide for exact integer work:
// monotone cumulative sum of exp(log pmf), pmf advanced by one log per step.
inline std::uint64_t hypergeom_logspace(std::uint64_t m_l, std::uint64_t m_r,
                                        std::uint64_t t, std::uint64_t x_lo,
                                        std::uint64_t x_hi, DeviateSource& src) {
  double u = uniform01_from(src);
  long double lp = lchoose(m_l, x_lo) + lchoose(m_r, t - x_lo) -
                   lchoose(m_l + m_r, t);
  long double cum = std::exp(lp);
  std::uint64_t x = x_lo;
  while (cum <= u && x < x_hi) {
    long double num = static_cast<long double>(m_l - x) *
                      static_cast<long double>(t - x);
    long double den = static_cast<long double>(x + 1) *
                      static_cast<long double>(m_r - t + x + 1);
    lp += std::log(num / den);
    ++x;
    cum += std::exp(lp);
  }
  return x;
}

}  // namespace detail

// Count going to an m_l-position left child when t of m_l+m_r positions are
// occupied, all placements equally likely. Exact arithmetic up to 2^20 total
// positions, log-space beyond.
inline std::uint64_t hypergeometric_sample(std::uint64_t m_l, std::uint64_t m_r,
                                           std::uint64_t t, DeviateSource& src) {
  if (t > m_l + m_r) throw InvalidArgument("occupancy exceeds positions");
  std::uint64_t x_lo = t > m_r ? t - m_r : 0;
  std::uint64_t x_hi = m_l < t ? m_l : t;
  if (x_lo == x_hi) return x_lo;
  if (m_l + m_r <= (1ull << 20))
    return detail::hypergeom_exact(m_l, m_r, t, x_lo, x_hi, src);
  return detail::hypergeom_logspace(m_l, m_r, t, x_lo, x_hi, src);
}

}  // namespace stego
