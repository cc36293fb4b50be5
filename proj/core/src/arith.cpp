#include "takum/arith.hpp"

#include "takum/error.hpp"

namespace takum {

namespace {

TakumBits round_finite(int sign_bit, const Dyadic& ell, unsigned n) {
  return round(BigReal::exp_half(sign_bit, ell), n);
}

const Dyadic& ell_of(const TakumValue& v) { return v.ell(); }

}  // namespace

Interval gauss_log_enclose(const GaussLogQuery& query, mpfr_prec_t prec) {
  if (query.q.sign() < 0) throw Error(ErrorKind::DomainError, "Gaussian logarithm needs q >= 0");
  if (query.variant == GaussVariant::Minus && query.q.is_zero())
    throw Error(ErrorKind::DomainError, "Gaussian logarithm minus variant undefined at q = 0");
  // Work in base e on t = q * ln(b) (t = q/2 for sqrt(e)), then scale the result by 1/ln(b).
  Interval q = query.q.enclose(prec);
  Mpfr tlo(prec), thi(prec);
  switch (query.base) {
    case GaussBase::E:
      mpfr_set(tlo.get(), q.lo.get(), MPFR_RNDD);
      mpfr_set(thi.get(), q.hi.get(), MPFR_RNDU);
      break;
    case GaussBase::SqrtE:
      mpfr_div_2ui(tlo.get(), q.lo.get(), 1, MPFR_RNDD);
      mpfr_div_2ui(thi.get(), q.hi.get(), 1, MPFR_RNDU);
      break;
    case GaussBase::Two: {
      Mpfr l2lo(prec), l2hi(prec);
      mpfr_const_log2(l2lo.get(), MPFR_RNDD);
      mpfr_const_log2(l2hi.get(), MPFR_RNDU);
      mpfr_mul(tlo.get(), q.lo.get(), l2lo.get(), MPFR_RNDD);
      mpfr_mul(thi.get(), q.hi.get(), l2hi.get(), MPFR_RNDU);
      break;
    }
  }
  if (mpfr_sgn(tlo.get()) < 0) mpfr_set_zero(tlo.get(), 1);
  // u = e^-t in [ulo, uhi]
  Mpfr ulo(prec), uhi(prec);
  mpfr_neg(thi.get(), thi.get(), MPFR_RNDN);
  mpfr_neg(tlo.get(), tlo.get(), MPFR_RNDN);
  mpfr_exp(ulo.get(), thi.get(), MPFR_RNDD);
  mpfr_exp(uhi.get(), tlo.get(), MPFR_RNDU);
  Interval out(prec);
  if (query.variant == GaussVariant::Plus) {
    mpfr_log1p(out.lo.get(), ulo.get(), MPFR_RNDD);
    mpfr_log1p(out.hi.get(), uhi.get(), MPFR_RNDU);
  } else {
    if (mpfr_cmp_ui(uhi.get(), 1) >= 0) {
      mpfr_set_inf(out.lo.get(), -1);
    } else {
      mpfr_neg(uhi.get(), uhi.get(), MPFR_RNDN);
      mpfr_log1p(out.lo.get(), uhi.get(), MPFR_RNDD);
    }
    mpfr_neg(ulo.get(), ulo.get(), MPFR_RNDN);
    mpfr_log1p(out.hi.get(), ulo.get(), MPFR_RNDU);
  }
  // back to base b: divide by ln b (sqrt(e): multiply by 2)
  switch (query.base) {
    case GaussBase::E:
      break;
    case GaussBase::SqrtE:
      mpfr_mul_2ui(out.lo.get(), out.lo.get(), 1, MPFR_RNDD);
      mpfr_mul_2ui(out.hi.get(), out.hi.get(), 1, MPFR_RNDU);
      break;
    case GaussBase::Two: {
      Mpfr l2lo(prec), l2hi(prec);
      mpfr_const_log2(l2lo.get(), MPFR_RNDD);
      mpfr_const_log2(l2hi.get(), MPFR_RNDU);
      // numerator sign decides which end of ln 2 to divide by
      bool pos = query.variant == GaussVariant::Plus;
      mpfr_div(out.lo.get(), out.lo.get(), pos ? l2hi.get() : l2lo.get(), MPFR_RNDD);
      mpfr_div(out.hi.get(), out.hi.get(), pos ? l2lo.get() : l2hi.get(), MPFR_RNDU);
      break;
    }
  }
  return out;
}

Mpfr gauss_log(const GaussLogQuery& query, mpfr_prec_t precision) {
  for (mpfr_prec_t p = precision + 16;; p *= 2) {
    Interval iv = gauss_log_enclose(query, p);
    Mpfr width(p);
    mpfr_sub(width.get(), iv.hi.get(), iv.lo.get(), MPFR_RNDU);
    if (mpfr_number_p(width.get()) && mpfr_cmp_si_2exp(width.get(), 1, -precision - 1) < 0) {
      Mpfr mid(p);
      mpfr_add(mid.get(), iv.lo.get(), iv.hi.get(), MPFR_RNDN);
      mpfr_div_2ui(mid.get(), mid.get(), 1, MPFR_RNDN);
      return mid;
    }
    if (p > kMaxOracleBits) throw std::runtime_error("gauss_log precision exhausted");
  }
}

TakumBits mul(const TakumValue& x, const TakumValue& y, unsigned n) {
  check_width(n);
  if (x.is_nar() || y.is_nar()) return TakumBits::nar(n);
  if (x.is_zero() || y.is_zero()) return TakumBits::zero(n);
  return round_finite(x.sign_bit() ^ y.sign_bit(), ell_of(x) + ell_of(y), n);
}

TakumBits div(const TakumValue& x, const TakumValue& y, unsigned n) {
  check_width(n);
  if (x.is_nar() || y.is_nar() || y.is_zero()) return TakumBits::nar(n);
  if (x.is_zero()) return TakumBits::zero(n);
  return round_finite(x.sign_bit() ^ y.sign_bit(), ell_of(x) - ell_of(y), n);
}

TakumBits inv(const TakumValue& x, unsigned n) {
  check_width(n);
  if (x.is_nar() || x.is_zero()) return TakumBits::nar(n);
  return round_finite(x.sign_bit(), -ell_of(x), n);
}

TakumBits sqrt_abs(const TakumValue& x, unsigned n) {
  check_width(n);
  if (x.is_nar()) return TakumBits::nar(n);
  if (x.is_zero()) return TakumBits::zero(n);
  return round_finite(0, ell_of(x).ldexp(-1), n);
}

TakumBits square(const TakumValue& x, unsigned n) {
  check_width(n);
  if (x.is_nar()) return TakumBits::nar(n);
  if (x.is_zero()) return TakumBits::zero(n);
  return round_finite(0, ell_of(x).ldexp(1), n);
}

ExactResult exact_add(const TakumValue& x, const TakumValue& y) {
  if (x.is_nar() || y.is_nar()) return {true, BigReal::zero()};
  if (x.is_zero()) return {false, y.to_real()};
  if (y.is_zero()) return {false, x.to_real()};
  const TakumValue& big = ell_of(x) >= ell_of(y) ? x : y;
  const TakumValue& small = ell_of(x) >= ell_of(y) ? y : x;
  Dyadic q = ell_of(big) - ell_of(small);
  bool same = x.sign_bit() == y.sign_bit();
  if (!same && q.is_zero()) return {false, BigReal::zero()};
  // l(result) = l(big) + Phi_{sqrt e}^{+-}(q)
  GaussLogQuery query{BigReal(q.to_mpq()), GaussBase::SqrtE, same ? GaussVariant::Plus : GaussVariant::Minus};
  Dyadic lbig = ell_of(big);
  int sbit = big.sign_bit();
  Encloser enc = [query, lbig, sbit](Interval& iv, mpfr_prec_t p) {
    Interval phi = gauss_log_enclose(query, p);
    Mpfr l(p);
    set_exact(l.get(), lbig);
    Mpfr llo(p), lhi(p);
    mpfr_add(llo.get(), l.get(), phi.lo.get(), MPFR_RNDD);
    mpfr_add(lhi.get(), l.get(), phi.hi.get(), MPFR_RNDU);
    mpfr_div_2ui(llo.get(), llo.get(), 1, MPFR_RNDD);
    mpfr_div_2ui(lhi.get(), lhi.get(), 1, MPFR_RNDU);
    mpfr_set_prec(iv.lo.get(), p);
    mpfr_set_prec(iv.hi.get(), p);
    mpfr_exp(iv.lo.get(), llo.get(), MPFR_RNDD);
    mpfr_exp(iv.hi.get(), lhi.get(), MPFR_RNDU);
    if (sbit) {
      mpfr_swap(iv.lo.get(), iv.hi.get());
      mpfr_neg(iv.lo.get(), iv.lo.get(), MPFR_RNDD);
      mpfr_neg(iv.hi.get(), iv.hi.get(), MPFR_RNDU);
    }
  };
  return {false, BigReal::computed(sbit ? -1 : 1, std::move(enc))};
}

TakumBits add(const TakumValue& x, const TakumValue& y, unsigned n) {
  check_width(n);
  ExactResult r = exact_add(x, y);
  if (r.nar) return TakumBits::nar(n);
  return round(r.value, n);
}

TakumBits sub(const TakumValue& x, const TakumValue& y, unsigned n) { return add(x, y.negated(), n); }

namespace {
void same_width(const TakumBits& a, const TakumBits& b) {
  if (a.width != b.width) throw Error(ErrorKind::WidthMismatch, "operands differ in width");
}
}  // namespace

TakumBits mul(const TakumBits& x, const TakumBits& y) {
  same_width(x, y);
  return mul(decode_value(x), decode_value(y), x.width);
}
TakumBits div(const TakumBits& x, const TakumBits& y) {
  same_width(x, y);
  return div(decode_value(x), decode_value(y), x.width);
}
TakumBits add(const TakumBits& x, const TakumBits& y) {
  same_width(x, y);
  return add(decode_value(x), decode_value(y), x.width);
}
TakumBits sub(const TakumBits& x, const TakumBits& y) {
  same_width(x, y);
  return sub(decode_value(x), decode_value(y), x.width);
}

}  // namespace takum
