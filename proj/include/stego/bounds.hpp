#pragma once

#include <gmpxx.h>

#include <cmath>
#include <cstdint>

#include "stego/common.hpp"

namespace stego {

// Closed-form bounds on detectability, reliability and query complexity of
// the rejection-sampler stegosystems, plus the exact combinatorial counts
// they rest on. All probability parameters use h = channel min-entropy in
// bits and w = hiddentext symbol width in bits.

// Number of stegotexts of length l whose total weight (sum over symbols of
// the first-hit draw position, each at least 1) is at most N. Equals C(N, l).
inline std::uint64_t count_low_weight(unsigned l, unsigned N) {
  if (l < 1 || N < l || N > 62)
    throw InvalidArgument("count_low_weight needs 1 <= l <= N <= 62");
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), N, l);
  if (!c.fits_ulong_p()) throw LimitExceeded("count does not fit in 64 bits");
  return static_cast<std::uint64_t>(c.get_ui());
}

namespace detail {

inline std::uint64_t count_tuples(unsigned remaining, unsigned budget) {
  if (remaining == 0) return 1;
  std::uint64_t total = 0;
  for (unsigned j = 1; j + (remaining - 1) <= budget; ++j)
    total += count_tuples(remaining - 1, budget - j);
  return total;
}

}  // namespace detail

// Literal enumeration of the weight-<=N tuples, used to cross-check
// count_low_weight. Kept to l <= N <= 30 so the walk stays tractable.
inline std::uint64_t count_low_weight_enumerated(unsigned l, unsigned N) {
  if (l < 1 || N < l || N > 30)
    throw InvalidArgument("enumeration needs 1 <= l <= N <= 30");
  return detail::count_tuples(l, N);
}

// Fraction of w-bit hiddentext space covered by weight-<=N stegotexts,
// C(N,l)/2^{lw}, next to the tail bound (N e / (l 2^w))^l that dominates it.
struct LemmaTailBound {
  double exact_fraction = 0;
  double bound = 0;
};

inline LemmaTailBound lemma_tail_bound(unsigned N, unsigned l, unsigned w) {
  if (l < 1 || N < l || N > 62)
    throw InvalidArgument("lemma_tail_bound needs 1 <= l <= N <= 62");
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  mpz_class c;
  mpz_bin_uiui(c.get_mpz_t(), N, l);
  LemmaTailBound out;
  out.exact_fraction =
      c.get_d() * std::ldexp(1.0, -static_cast<int>(l) * static_cast<int>(w));
  double ratio = static_cast<double>(N) * std::exp(1.0) /
                 (static_cast<double>(l) * std::ldexp(1.0, static_cast<int>(w)));
  out.bound = std::pow(ratio, static_cast<double>(l));
  if (out.exact_fraction > out.bound)
    throw StegoError("tail bound violated, combinatorial identity broken");
  return out;
}

// Lower bound on expected channel queries per hiddentext symbol for any
// black-box stegosystem with unreliability rho and detector slack eps,
// R = S/(S - H) for alphabet size S and support size H. Clamped at zero.
inline double lower_bound_queries(unsigned w, double rho, double eps, double R) {
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  if (rho < 0 || rho > 1) throw InvalidArgument("unreliability must be in [0,1]");
  if (eps < 0) throw InvalidArgument("detector slack must be nonnegative");
  if (R < 1) throw InvalidArgument("R must be at least 1");
  double v = std::ldexp(1.0, static_cast<int>(w)) / std::exp(1.0) *
             (0.5 - rho - eps * R);
  return v > 0 ? v : 0.0;
}

// Same bound against computationally bounded detectors; prf_terms absorbs
// the distinguishing advantages of the pseudorandom components.
inline double lower_bound_queries_bounded(unsigned w, double rho, double eps,
                                          double R, double prf_terms) {
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  if (rho < 0 || rho > 1) throw InvalidArgument("unreliability must be in [0,1]");
  if (eps < 0) throw InvalidArgument("detector slack must be nonnegative");
  if (R < 1) throw InvalidArgument("R must be at least 1");
  if (prf_terms < 0) throw InvalidArgument("prf terms must be nonnegative");
  double v = std::ldexp(1.0, static_cast<int>(w)) / std::exp(1.0) *
             (0.5 - rho - R * eps - (R + 1.0) * prf_terms);
  return v > 0 ? v : 0.0;
}

namespace detail {

inline void check_bound_params(unsigned h, unsigned w, std::uint64_t l,
                               std::uint64_t k) {
  if (h < 1 || h > 64) throw InvalidArgument("entropy parameter must be in [1,64]");
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  if (k < 1) throw InvalidArgument("draw budget must be at least 1");
  (void)l;
}

}  // namespace detail

// Statistical insecurity of the bounded stegosystem over l symbols with draw
// budget k: 2^{-h}(l(l+1)2^{2w} - l(l+3)2^w + 2l) + 2l(1 - 2^{-w})^k.
inline double stl_insecurity_bound(unsigned h, unsigned w, std::uint64_t l,
                                   std::uint64_t k) {
  detail::check_bound_params(h, w, l, k);
  double p = std::ldexp(1.0, -static_cast<int>(h));
  double R = std::ldexp(1.0, static_cast<int>(w));
  double ld = static_cast<double>(l);
  double poly = ld * (ld + 1.0) * R * R - ld * (ld + 3.0) * R + 2.0 * ld;
  double geom = 2.0 * ld * std::pow(1.0 - 1.0 / R, static_cast<double>(k));
  return p * poly + geom;
}

// Failure probability bound for the collision-aborting hybrid of the bounded
// encoder: 2^{-h}((R^2/2)(l+1)l - (R/2)(l+3)l + l) + l((R-1)/R)^k, R = 2^w.
// The insecurity bound above is exactly twice this.
inline double se2_fail_bound(unsigned h, unsigned w, std::uint64_t l,
                             std::uint64_t k) {
  detail::check_bound_params(h, w, l, k);
  double p = std::ldexp(1.0, -static_cast<int>(h));
  double R = std::ldexp(1.0, static_cast<int>(w));
  double ld = static_cast<double>(l);
  double poly = R * R / 2.0 * (ld + 1.0) * ld - R / 2.0 * (ld + 3.0) * ld + ld;
  double geom = ld * std::pow((R - 1.0) / R, static_cast<double>(k));
  return p * poly + geom;
}

// Unreliability of the bounded stegosystem over l symbols:
// l(2^w exp(-2^{h-2w-1}) + exp(-2^{-w-1} k)).
inline double stl_unreliability_bound(unsigned h, unsigned w, std::uint64_t l,
                                      std::uint64_t k) {
  detail::check_bound_params(h, w, l, k);
  double ld = static_cast<double>(l);
  double t1 = std::ldexp(1.0, static_cast<int>(w)) *
              std::exp(-std::ldexp(1.0, static_cast<int>(h) -
                                            2 * static_cast<int>(w) - 1));
  double t2 = std::exp(-std::ldexp(static_cast<double>(k),
                                   -static_cast<int>(w) - 1));
  return ld * (t1 + t2);
}

// Per-symbol decode error probability of the stateful system with an ideal
// symbol function: 2^{-h}(2^w - 1).
inline double stf_symbol_error_prob(unsigned h, unsigned w) {
  if (h < 1 || h > 64) throw InvalidArgument("entropy parameter must be in [1,64]");
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  return std::ldexp(1.0, -static_cast<int>(h)) *
         (std::ldexp(1.0, static_cast<int>(w)) - 1.0);
}

// Unreliability of the stateless variant with an exact sample log over an
// l-symbol message: l^2 2^{-h+w}.
inline double stateless_stf_unreliability_bound(unsigned h, unsigned w,
                                                std::uint64_t l) {
  if (h < 1 || h > 64) throw InvalidArgument("entropy parameter must be in [1,64]");
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  double ld = static_cast<double>(l);
  return ld * ld * std::ldexp(1.0, static_cast<int>(w) - static_cast<int>(h));
}

// Bloom budget that keeps the false-positive contribution comparable to the
// collision term: (h - w - log2 l) / ln 2 bits per logged draw.
inline double bloom_bits_per_entry(unsigned h, unsigned w, std::uint64_t l) {
  if (h < 1 || h > 64) throw InvalidArgument("entropy parameter must be in [1,64]");
  if (w < 1 || w > 32) throw InvalidArgument("symbol width must be in [1,32]");
  if (l < 1) throw InvalidArgument("message length must be at least 1");
  double v = (static_cast<double>(h) - static_cast<double>(w) -
              std::log2(static_cast<double>(l))) /
             std::log(2.0);
  if (v <= 0) throw InvalidArgument("no positive bloom budget for these parameters");
  return v;
}

}  // namespace stego
