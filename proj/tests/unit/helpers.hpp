#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <utility>

#include <mpfr.h>

#include "takum/bits.hpp"
#include "takum/codec.hpp"
#include "takum/dyadic.hpp"
#include "takum/oracle.hpp"

namespace takum::testing {

// Total order on decoded takum values built from (S, l) alone:
// NaR < negatives (larger l more negative) < 0 < positives.
struct ValueKey {
  int band = 0;  // -2 NaR, -1 negative, 0 zero, 1 positive
  Dyadic key;
  auto operator<=>(const ValueKey&) const = default;
};

inline ValueKey value_key(const TakumValue& v) {
  if (v.is_nar()) return {-2, Dyadic()};
  if (v.is_zero()) return {0, Dyadic()};
  if (v.sign_bit()) return {-1, -v.ell()};
  return {1, v.ell()};
}

// Parses an MSB-first bit string like "0100" into a pattern of that width.
inline TakumBits bits_of(const std::string& s) {
  std::uint64_t p = 0;
  for (char c : s) p = (p << 1) | static_cast<std::uint64_t>(c == '1');
  return TakumBits::make(static_cast<unsigned>(s.size()), p);
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 g(0x7a6b756dULL);
  return g;
}

// Random real (-1)^s * 2^(a + u) with u in [0,1) as a 60-bit dyadic, so
// magnitudes cover [2^lo, 2^hi).
inline BigReal random_real(int lo, int hi, bool allow_negative = true) {
  auto& g = rng();
  std::uniform_int_distribution<int> ex(lo, hi - 1);
  std::uint64_t frac = g() >> 4;  // 60 bits
  mpq_class m(mpz_class(std::to_string(frac)), 1);
  mpq_div_2exp(m.get_mpq_t(), m.get_mpq_t(), 60);
  m += 1;
  int e = ex(g);
  if (e >= 0) {
    mpq_mul_2exp(m.get_mpq_t(), m.get_mpq_t(), static_cast<unsigned long>(e));
  } else {
    mpq_div_2exp(m.get_mpq_t(), m.get_mpq_t(), static_cast<unsigned long>(-e));
  }
  if (allow_negative && (g() & 1)) m = -m;
  return BigReal(m);
}

// Random irrational sqrt(e)^l with l uniform in (lo, hi) on a 2^-40 grid.
inline BigReal random_exp_half(double lo, double hi) {
  auto& g = rng();
  std::uniform_real_distribution<double> d(lo, hi);
  double l = d(g);
  auto scaled = static_cast<std::int64_t>(l * 1099511627776.0);  // 2^40
  if (scaled == 0) scaled = 1;
  int s = static_cast<int>(g() & 1);
  return BigReal::exp_half(s, Dyadic::from_fixed(scaled, 40));
}

// Nearest takum pattern to a value of the given sign whose l = 2 ln|x| lies in
// [llo, lhi], chosen by bisection over decoded positive patterns. Ties (an
// exact midpoint) go to the larger value, i.e. the smaller magnitude for
// negatives. Out-of-range magnitudes clamp to the extreme patterns.
inline std::uint64_t nearest_takum(bool negative, const Mpfr& llo, const Mpfr& lhi, unsigned n) {
  auto ell = [n](std::uint64_t p) { return decode_value(TakumBits::make(n, p)).ell(); };
  auto cmp = [&](const Dyadic& d) {  // sign of l - d, 0 if undecided
    Mpfr t(64);
    set_exact(t.get(), d);
    if (mpfr_cmp(llo.get(), t.get()) > 0) return 1;
    if (mpfr_cmp(lhi.get(), t.get()) < 0) return -1;
    return 0;
  };
  const std::uint64_t maxp = width_mask(n - 1);
  std::uint64_t pos;
  if (cmp(ell(1)) <= 0) {
    pos = 1;
  } else if (cmp(ell(maxp)) >= 0) {
    pos = maxp;
  } else {
    std::uint64_t lo = 1, hi = maxp;
    while (hi - lo > 1) {
      std::uint64_t mid = lo + (hi - lo) / 2;
      (cmp(ell(mid)) >= 0 ? lo : hi) = mid;
    }
    int c = cmp((ell(lo) + ell(hi)).ldexp(-1));
    if (c == 0) {
      pos = negative ? lo : hi;
    } else {
      pos = c > 0 ? hi : lo;
    }
  }
  return negative ? (~pos + 1) & width_mask(n) : pos;
}

}  // namespace takum::testing
