#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <utility>

#include <gmpxx.h>
#include <mpfr.h>

#include "takum/dyadic.hpp"

namespace takum {

// Baseline working precision in bits; TAKUM_ORACLE_BITS overrides (read once).
mpfr_prec_t oracle_bits();
// Hard ceiling for escalation loops; hitting it means the decision is not decidable.
inline constexpr mpfr_prec_t kMaxOracleBits = 1 << 16;

class Mpfr {
 public:
  explicit Mpfr(mpfr_prec_t prec = 64) { mpfr_init2(v_, prec); }
  Mpfr(const Mpfr& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  Mpfr(Mpfr&& o) noexcept {
    mpfr_init2(v_, MPFR_PREC_MIN);
    mpfr_swap(v_, o.v_);
  }
  Mpfr& operator=(Mpfr o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~Mpfr() { mpfr_clear(v_); }

  mpfr_ptr get() { return v_; }
  mpfr_srcptr get() const { return v_; }
  mpfr_prec_t prec() const { return mpfr_get_prec(v_); }
  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

 private:
  mpfr_t v_;
};

// Closed interval [lo, hi] guaranteed to contain the true value.
struct Interval {
  Mpfr lo, hi;
  explicit Interval(mpfr_prec_t prec) : lo(prec), hi(prec) {}
  // lo, hi of opposite signs (or touching zero)
  bool straddles_zero() const { return mpfr_sgn(lo.get()) <= 0 && mpfr_sgn(hi.get()) >= 0; }
};

void set_exact(mpfr_ptr dst, const Dyadic& d);  // grows precision as needed
void set_exact(mpfr_ptr dst, const mpz_class& z);

using Encloser = std::function<void(Interval&, mpfr_prec_t)>;

// A real number with enough structure to decide exactness questions.
//  - Rational: exact mpq
//  - ExpHalf:  (-1)^sign * sqrt(e)^l with exact dyadic l != 0 (l == 0 collapses to rational +-1)
//  - Computed: an irrational nonzero value known only through enclosures
class BigReal {
 public:
  enum class Kind { Rational, ExpHalf, Computed };

  BigReal() : BigReal(mpq_class(0)) {}
  explicit BigReal(mpq_class q);
  static BigReal zero() { return BigReal(); }
  static BigReal from_int(long v) { return BigReal(mpq_class(v)); }
  // Exact parse of a decimal literal such as "6.62607015e-34".
  static BigReal from_decimal(std::string_view text);
  static BigReal exp_half(int sign_bit, const Dyadic& l);
  // sign in {-1, +1}; enclose must return ever-tighter intervals as precision grows.
  static BigReal computed(int sign, Encloser enclose);
  static BigReal from_double(double v) { return BigReal(mpq_class(v)); }

  Kind kind() const { return kind_; }
  int sign() const { return sign_; }
  bool is_zero() const { return sign_ == 0; }
  const mpq_class* rational() const { return kind_ == Kind::Rational ? &q_ : nullptr; }
  // (sign bit, l) for ExpHalf, or for rational +-1 with l = 0.
  std::optional<std::pair<int, Dyadic>> exp_half_form() const;

  // Enclosure of the value at working precision prec.
  Interval enclose(mpfr_prec_t prec) const;
  // Enclosure of l = 2 ln|x| (x != 0).
  Interval enclose_log(mpfr_prec_t prec) const;
  double to_double() const;

  BigReal abs() const;
  BigReal operator-() const;

 private:
  Kind kind_ = Kind::Rational;
  int sign_ = 0;
  mpq_class q_;
  Dyadic ell_;
  std::shared_ptr<const Encloser> enclose_;
};

BigReal operator+(const BigReal& a, const BigReal& b);
BigReal operator-(const BigReal& a, const BigReal& b);
BigReal operator*(const BigReal& a, const BigReal& b);
BigReal operator/(const BigReal& a, const BigReal& b);  // b != 0
BigReal reciprocal(const BigReal& a);                    // a != 0
BigReal sqrt(const BigReal& a);                          // a >= 0
BigReal square(const BigReal& a);

// Exact equality. Computed values are irrational and never equal to rational
// or ExpHalf values; two Computed values cannot be compared (throws).
bool exactly_equal(const BigReal& a, const BigReal& b);
// Three-way comparison, exact where possible, otherwise by refinement.
int compare(const BigReal& a, const BigReal& b);
int compare(const BigReal& a, const mpq_class& b);

// Relative error (rounded - exact) / exact as an enclosure at precision prec.
Interval relative_error(const BigReal& rounded, const BigReal& exact, mpfr_prec_t prec);

// Runs decide(prec) with prec = oracle_bits(), 2*prec, ... until it returns a value.
template <class F>
auto escalate(F&& decide, mpfr_prec_t start = 0) -> typename decltype(decide(mpfr_prec_t{}))::value_type {
  for (mpfr_prec_t p = start > 0 ? start : oracle_bits(); p <= kMaxOracleBits; p *= 2) {
    if (auto r = decide(p)) return *r;
  }
  throw std::runtime_error("oracle precision exhausted");
}

}  // namespace takum
