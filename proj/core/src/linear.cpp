#include "takum/linear.hpp"

#include <algorithm>
#include <sstream>

#include "takum/decimal.hpp"
#include "takum/error.hpp"

namespace takum {

namespace {

mpq_class pow2(long e) {
  mpq_class q(1);
  if (e >= 0) {
    mpq_mul_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(e));
  } else {
    mpq_div_2exp(q.get_mpq_t(), q.get_mpq_t(), static_cast<unsigned long>(-e));
  }
  return q;
}

// floor(log2 q), q > 0
long floor_log2(const mpq_class& q) {
  long e = static_cast<long>(mpz_sizeinbase(q.get_num_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_den_mpz_t(), 2));
  if (q < pow2(e)) --e;
  return e;
}

// Pattern quantity w = c + f for a rational x (S chosen from the sign of x).
class RationalLinearSource final : public PatternSource {
 public:
  explicit RationalLinearSource(const mpq_class& x) : sign_(sgn(x) < 0 ? 1 : 0) {
    mpq_class a = abs(x);
    long e = floor_log2(a);
    if (sign_ == 0) {
      w_ = mpq_class(e) + a / pow2(e) - 1;  // c = e, f = x/2^e - 1
    } else {
      if (a == pow2(e)) --e;                    // ceil(log2|x|) - 1
      w_ = mpq_class(1 - e) - a / pow2(e);      // c = -e-1, f = 2 - |x|/2^e
    }
  }
  int sign_bit() const override { return sign_; }
  i128 floor_scaled(int j) const override {
    mpq_class s = w_ * pow2(j);
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
    return to_i128(fl);
  }
  bool exact_at(int j) const override {
    mpq_class s = w_ * pow2(j);
    return s.get_den() == 1;
  }

 private:
  int sign_;
  mpq_class w_;
};

// Same quantity for a non-rational real, refined through enclosures of |x|.
class OracleLinearSource final : public PatternSource {
 public:
  explicit OracleLinearSource(BigReal x) : x_(std::move(x)), sign_(x_.sign() < 0 ? 1 : 0) {}
  int sign_bit() const override { return sign_; }
  i128 floor_scaled(int j) const override {
    return escalate([&](mpfr_prec_t p) -> std::optional<i128> {
      Interval iv = x_.abs().enclose(std::max<mpfr_prec_t>(p, j + 48));
      if (mpfr_sgn(iv.lo.get()) <= 0) return std::nullopt;
      long ea = mpfr_get_exp(iv.lo.get()) - 1, eb = mpfr_get_exp(iv.hi.get()) - 1;
      if (ea != eb) return std::nullopt;
      long e = ea;
      Mpfr lo(iv.lo.prec() + 64), hi(iv.hi.prec() + 64);
      // S=0: w = e - 1 + |x|/2^e ; S=1: w = 1 - e - |x|/2^e
      if (sign_ == 0) {
        mpfr_div_2si(lo.get(), iv.lo.get(), e, MPFR_RNDD);
        mpfr_div_2si(hi.get(), iv.hi.get(), e, MPFR_RNDU);
        mpfr_add_si(lo.get(), lo.get(), e - 1, MPFR_RNDD);
        mpfr_add_si(hi.get(), hi.get(), e - 1, MPFR_RNDU);
      } else {
        mpfr_div_2si(lo.get(), iv.hi.get(), e, MPFR_RNDU);
        mpfr_div_2si(hi.get(), iv.lo.get(), e, MPFR_RNDD);
        mpfr_si_sub(lo.get(), 1 - e, lo.get(), MPFR_RNDD);
        mpfr_si_sub(hi.get(), 1 - e, hi.get(), MPFR_RNDU);
      }
      mpfr_mul_2si(lo.get(), lo.get(), j, MPFR_RNDD);
      mpfr_mul_2si(hi.get(), hi.get(), j, MPFR_RNDU);
      mpz_class a, b;
      mpfr_get_z(a.get_mpz_t(), lo.get(), MPFR_RNDD);
      mpfr_get_z(b.get_mpz_t(), hi.get(), MPFR_RNDD);
      if (a != b) return std::nullopt;
      return to_i128(a);
    });
  }
  bool exact_at(int) const override { return false; }

 private:
  BigReal x_;
  int sign_;
};

}  // namespace

LinearTakumValue LinearTakumValue::finite(int sign_bit, const Dyadic& f, int e) {
  if (f.sign() < 0 || f >= Dyadic(1)) throw Error(ErrorKind::OutOfRange, "fraction outside [0, 1)");
  if (e < -255 || e > 254) throw Error(ErrorKind::OutOfRange, "exponent outside [-255, 254]");
  return LinearTakumValue(Kind::Finite, sign_bit ? 1 : 0, f, e);
}

mpq_class LinearTakumValue::to_rational() const {
  if (kind_ == Kind::NaR) throw Error(ErrorKind::NotFinite, "NaR has no real value");
  if (kind_ == Kind::Zero) return 0;
  mpq_class base = mpq_class(1 - 3 * sign_) + f_.to_mpq();
  return base * pow2(e_);
}

LinearTakumValue lin_decode(const TakumBits& bits) {
  if (bits.is_zero()) return LinearTakumValue::zero();
  if (bits.is_nar()) return LinearTakumValue::nar();
  DecodedFields d = decode(bits).fields;
  int s = static_cast<int>(d.sign);
  int e = s ? -(d.characteristic + 1) : d.characteristic;
  return LinearTakumValue::finite(s, d.mantissa_value, e);
}

LinearFields lin_encode(const DyadicTriple& t) {
  if (t.exponent < -255 || t.exponent > 254) throw Error(ErrorKind::OutOfRange, "exponent outside [-255, 254]");
  if (t.fraction.sign() < 0 || t.fraction >= Dyadic(1)) throw Error(ErrorKind::OutOfRange, "fraction outside [0, 1)");
  if (t.exponent == -255 && t.fraction.is_zero()) throw Error(ErrorKind::OutOfRange, "2^-255 is not representable");
  LinearFields out;
  out.sign = t.sign ? 1 : 0;
  int c;
  Dyadic f;
  if (out.sign == 0) {
    c = t.exponent;
    f = t.fraction;
  } else if (t.fraction.is_zero()) {
    c = -t.exponent;
    f = Dyadic();
  } else {
    c = -t.exponent - 1;
    f = Dyadic(1) - t.fraction;
  }
  if (c < -255 || c > 254) throw Error(ErrorKind::OutOfRange, "characteristic outside [-255, 254]");
  CharacteristicFields cf = characteristic_fields(c);
  out.direction = cf.direction;
  out.regime_bits = cf.regime_bits;
  out.regime = cf.regime;
  out.characteristic_bits = cf.characteristic_bits;
  out.characteristic = c;
  out.fraction_bits = f.frac_bits();
  out.fraction = static_cast<std::uint64_t>(f.floor_scaled(out.fraction_bits));
  return out;
}

TakumBits lin_pattern(const LinearFields& f) {
  unsigned w = static_cast<unsigned>(5 + f.regime + f.fraction_bits);
  check_width(std::max(w, 2u));
  std::uint64_t head = (std::uint64_t{f.sign} << (4 + f.regime)) | (std::uint64_t{f.direction} << (3 + f.regime)) |
                       (std::uint64_t{f.regime_bits} << f.regime) | f.characteristic_bits;
  return TakumBits::make(std::max(w, 2u), (head << f.fraction_bits) | f.fraction);
}

DyadicTriple lin_decode_to_float(const LinearTakumValue& v) {
  if (!v.is_finite()) throw Error(ErrorKind::NotFinite, "lin_decode_to_float needs a finite value");
  DyadicTriple t;
  t.sign = v.sign_bit();
  if (t.sign == 0) {
    t.exponent = v.exponent();
    t.fraction = v.fraction();
  } else if (v.fraction().is_zero()) {
    t.exponent = v.exponent() + 1;
    t.fraction = Dyadic();
  } else {
    t.exponent = v.exponent();
    t.fraction = Dyadic(1) - v.fraction();
  }
  return t;
}

TakumBits lin_round(const BigReal& x, unsigned n) {
  check_width(n);
  if (x.is_zero()) return TakumBits::zero(n);
  const mpq_class hi = pow2(255), lo = pow2(-255);
  int above = compare(x.abs(), hi);
  int below = compare(x.abs(), lo);
  RationalLinearSource sign_only(mpq_class(x.sign()));
  if (above >= 0) return round_pattern(sign_only, Saturation::AboveMax, n);
  if (below <= 0) return round_pattern(sign_only, Saturation::BelowMin, n);
  if (const mpq_class* q = x.rational()) return round_pattern(RationalLinearSource(*q), Saturation::None, n);
  return round_pattern(OracleLinearSource(x), Saturation::None, n);
}

std::string lin_dump(const TakumBits& bits) {
  LinearTakumValue v = lin_decode(bits);
  std::ostringstream os;
  os << to_text(bits, "lintakum") << "\n";
  switch (v.kind()) {
    case LinearTakumValue::Kind::Zero: os << "value=0\n"; break;
    case LinearTakumValue::Kind::NaR: os << "value=NaR\n"; break;
    case LinearTakumValue::Kind::Finite:
      os << "S=" << v.sign_bit() << " f=" << v.fraction().to_string() << " e=" << v.exponent() << "\n";
      os << "value=" << to_shortest(BigReal(v.to_rational())) << "\n";
      break;
  }
  return os.str();
}

}  // namespace takum
