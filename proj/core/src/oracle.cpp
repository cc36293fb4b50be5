#include "takum/oracle.hpp"

#include <algorithm>
#include <cstdlib>
#include <string>

#include "takum/error.hpp"

namespace takum {

mpfr_prec_t oracle_bits() {
  static const mpfr_prec_t bits = [] {
    mpfr_prec_t b = 192;
    if (const char* env = std::getenv("TAKUM_ORACLE_BITS")) {
      try {
        long v = std::stol(env);
        if (v >= 64 && v <= kMaxOracleBits) b = v;
      } catch (const std::exception&) {
      }
    }
    return b;
  }();
  return bits;
}

void set_exact(mpfr_ptr dst, const mpz_class& z) {
  auto need = static_cast<mpfr_prec_t>(mpz_sizeinbase(z.get_mpz_t(), 2)) + 1;
  if (mpfr_get_prec(dst) < need) mpfr_set_prec(dst, need);
  mpfr_set_z(dst, z.get_mpz_t(), MPFR_RNDN);
}

void set_exact(mpfr_ptr dst, const Dyadic& d) {
  set_exact(dst, to_mpz(d.numerator()));
  mpfr_mul_2si(dst, dst, d.exponent(), MPFR_RNDN);
}

namespace {

void negate_interval(Interval& iv) {
  mpfr_swap(iv.lo.get(), iv.hi.get());
  mpfr_neg(iv.lo.get(), iv.lo.get(), MPFR_RNDD);
  mpfr_neg(iv.hi.get(), iv.hi.get(), MPFR_RNDU);
}

// Enclosure of |x| with a strictly positive lower end (x != 0), refining as needed.
Interval magnitude(const BigReal& x, mpfr_prec_t prec) {
  for (mpfr_prec_t p = prec;; p *= 2) {
    Interval iv = x.enclose(p);
    if (x.sign() < 0) negate_interval(iv);
    if (mpfr_sgn(iv.lo.get()) > 0) return iv;
    if (p > kMaxOracleBits) throw std::runtime_error("cannot separate value from zero");
  }
}

bool is_perfect_square(const mpq_class& q, mpq_class& root) {
  if (!mpz_perfect_square_p(q.get_num_mpz_t()) || !mpz_perfect_square_p(q.get_den_mpz_t())) return false;
  mpz_class n, d;
  mpz_sqrt(n.get_mpz_t(), q.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), q.get_den_mpz_t());
  root = mpq_class(n, d);
  root.canonicalize();
  return true;
}

}  // namespace

BigReal::BigReal(mpq_class q) : kind_(Kind::Rational), q_(std::move(q)) {
  q_.canonicalize();
  sign_ = sgn(q_);
}

BigReal BigReal::from_decimal(std::string_view text) { return BigReal(parse_decimal_exact(text)); }

BigReal BigReal::exp_half(int sign_bit, const Dyadic& l) {
  if (l.is_zero()) return BigReal(mpq_class(sign_bit ? -1 : 1));
  BigReal r;
  r.kind_ = Kind::ExpHalf;
  r.sign_ = sign_bit ? -1 : 1;
  r.ell_ = l;
  return r;
}

BigReal BigReal::computed(int sign, Encloser enclose) {
  BigReal r;
  r.kind_ = Kind::Computed;
  r.sign_ = sign < 0 ? -1 : 1;
  r.enclose_ = std::make_shared<const Encloser>(std::move(enclose));
  return r;
}

std::optional<std::pair<int, Dyadic>> BigReal::exp_half_form() const {
  if (kind_ == Kind::ExpHalf) return std::make_pair(sign_ < 0 ? 1 : 0, ell_);
  if (kind_ == Kind::Rational && ::abs(q_) == 1) return std::make_pair(sign_ < 0 ? 1 : 0, Dyadic());
  return std::nullopt;
}

Interval BigReal::enclose(mpfr_prec_t prec) const {
  Interval iv(prec);
  switch (kind_) {
    case Kind::Rational:
      mpfr_set_q(iv.lo.get(), q_.get_mpq_t(), MPFR_RNDD);
      mpfr_set_q(iv.hi.get(), q_.get_mpq_t(), MPFR_RNDU);
      break;
    case Kind::ExpHalf: {
      Mpfr t(prec);
      set_exact(t.get(), ell_);
      mpfr_div_2ui(t.get(), t.get(), 1, MPFR_RNDN);
      mpfr_exp(iv.lo.get(), t.get(), MPFR_RNDD);
      mpfr_exp(iv.hi.get(), t.get(), MPFR_RNDU);
      if (sign_ < 0) negate_interval(iv);
      break;
    }
    case Kind::Computed:
      (*enclose_)(iv, prec);
      break;
  }
  return iv;
}

Interval BigReal::enclose_log(mpfr_prec_t prec) const {
  if (sign_ == 0) throw Error(ErrorKind::DomainError, "log of zero");
  Interval out(prec);
  if (kind_ == Kind::ExpHalf) {
    set_exact(out.lo.get(), ell_);
    set_exact(out.hi.get(), ell_);
    return out;
  }
  Interval m = magnitude(*this, prec);
  mpfr_log(out.lo.get(), m.lo.get(), MPFR_RNDD);
  mpfr_log(out.hi.get(), m.hi.get(), MPFR_RNDU);
  mpfr_mul_2ui(out.lo.get(), out.lo.get(), 1, MPFR_RNDD);
  mpfr_mul_2ui(out.hi.get(), out.hi.get(), 1, MPFR_RNDU);
  return out;
}

double BigReal::to_double() const {
  if (kind_ == Kind::Rational) {
    Mpfr t(64);
    mpfr_set_q(t.get(), q_.get_mpq_t(), MPFR_RNDN);
    return t.to_double();
  }
  Interval iv = enclose(128);
  return iv.lo.to_double();
}

BigReal BigReal::operator-() const {
  switch (kind_) {
    case Kind::Rational: return BigReal(mpq_class(-q_));
    case Kind::ExpHalf: return exp_half(sign_ > 0 ? 1 : 0, ell_);
    case Kind::Computed: {
      BigReal self = *this;
      return computed(-sign_, [self](Interval& iv, mpfr_prec_t p) {
        iv = self.enclose(p);
        negate_interval(iv);
      });
    }
  }
  return *this;
}

BigReal BigReal::abs() const { return sign_ < 0 ? -*this : *this; }

BigReal operator*(const BigReal& a, const BigReal& b) {
  if (a.is_zero() || b.is_zero()) return BigReal::zero();
  if (a.rational() && b.rational()) return BigReal(*a.rational() * *b.rational());
  auto fa = a.exp_half_form(), fb = b.exp_half_form();
  if (fa && fb) return BigReal::exp_half(fa->first ^ fb->first, fa->second + fb->second);
  int s = a.sign() * b.sign();
  return BigReal::computed(s, [a, b, s](Interval& iv, mpfr_prec_t p) {
    Interval ma = magnitude(a, p), mb = magnitude(b, p);
    mpfr_set_prec(iv.lo.get(), p);
    mpfr_set_prec(iv.hi.get(), p);
    mpfr_mul(iv.lo.get(), ma.lo.get(), mb.lo.get(), MPFR_RNDD);
    mpfr_mul(iv.hi.get(), ma.hi.get(), mb.hi.get(), MPFR_RNDU);
    if (s < 0) negate_interval(iv);
  });
}

BigReal operator/(const BigReal& a, const BigReal& b) {
  if (b.is_zero()) throw Error(ErrorKind::DomainError, "division by zero");
  if (a.is_zero()) return BigReal::zero();
  if (a.rational() && b.rational()) return BigReal(*a.rational() / *b.rational());
  auto fa = a.exp_half_form(), fb = b.exp_half_form();
  if (fa && fb) return BigReal::exp_half(fa->first ^ fb->first, fa->second - fb->second);
  int s = a.sign() * b.sign();
  return BigReal::computed(s, [a, b, s](Interval& iv, mpfr_prec_t p) {
    Interval ma = magnitude(a, p), mb = magnitude(b, p);
    mpfr_set_prec(iv.lo.get(), p);
    mpfr_set_prec(iv.hi.get(), p);
    mpfr_div(iv.lo.get(), ma.lo.get(), mb.hi.get(), MPFR_RNDD);
    mpfr_div(iv.hi.get(), ma.hi.get(), mb.lo.get(), MPFR_RNDU);
    if (s < 0) negate_interval(iv);
  });
}

BigReal reciprocal(const BigReal& a) { return BigReal::from_int(1) / a; }

BigReal square(const BigReal& a) { return a * a; }

BigReal sqrt(const BigReal& a) {
  if (a.sign() < 0) throw Error(ErrorKind::DomainError, "square root of a negative value");
  if (a.is_zero()) return a;
  if (const mpq_class* q = a.rational()) {
    mpq_class root;
    if (is_perfect_square(*q, root)) return BigReal(root);
  }
  if (auto f = a.exp_half_form()) return BigReal::exp_half(0, f->second.ldexp(-1));
  return BigReal::computed(1, [a](Interval& iv, mpfr_prec_t p) {
    Interval m = magnitude(a, p);
    mpfr_set_prec(iv.lo.get(), p);
    mpfr_set_prec(iv.hi.get(), p);
    mpfr_sqrt(iv.lo.get(), m.lo.get(), MPFR_RNDD);
    mpfr_sqrt(iv.hi.get(), m.hi.get(), MPFR_RNDU);
  });
}

BigReal operator+(const BigReal& a, const BigReal& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.rational() && b.rational()) return BigReal(*a.rational() + *b.rational());
  auto fa = a.exp_half_form(), fb = b.exp_half_form();
  if (fa && fb && fa->second == fb->second && fa->first != fb->first) return BigReal::zero();
  Encloser enc = [a, b](Interval& iv, mpfr_prec_t p) {
    Interval ea = a.enclose(p), eb = b.enclose(p);
    mpfr_set_prec(iv.lo.get(), p);
    mpfr_set_prec(iv.hi.get(), p);
    mpfr_add(iv.lo.get(), ea.lo.get(), eb.lo.get(), MPFR_RNDD);
    mpfr_add(iv.hi.get(), ea.hi.get(), eb.hi.get(), MPFR_RNDU);
  };
  int s;
  if (a.sign() == b.sign()) {
    s = a.sign();
  } else if (fa && fb) {
    s = fa->second > fb->second ? a.sign() : b.sign();
  } else {
    s = escalate([&](mpfr_prec_t p) -> std::optional<int> {
      Interval iv(p);
      enc(iv, p);
      if (iv.straddles_zero()) return std::nullopt;
      return mpfr_sgn(iv.lo.get());
    });
  }
  return BigReal::computed(s, std::move(enc));
}

BigReal operator-(const BigReal& a, const BigReal& b) { return a + (-b); }

bool exactly_equal(const BigReal& a, const BigReal& b) {
  if (a.sign() != b.sign()) return false;
  if (a.is_zero()) return true;
  using K = BigReal::Kind;
  if (a.kind() == K::Computed && b.kind() == K::Computed)
    throw std::logic_error("equality of two enclosure-only reals is undecidable");
  if (a.kind() == K::Computed || b.kind() == K::Computed) return false;
  if (a.rational() && b.rational()) return *a.rational() == *b.rational();
  auto fa = a.exp_half_form(), fb = b.exp_half_form();
  return fa && fb && *fa == *fb;
}

int compare(const BigReal& a, const BigReal& b) {
  if (a.rational() && b.rational()) {
    int c = cmp(*a.rational(), *b.rational());
    return (c > 0) - (c < 0);
  }
  if (a.sign() != b.sign()) return a.sign() < b.sign() ? -1 : 1;
  if (a.is_zero()) return 0;
  auto fa = a.exp_half_form(), fb = b.exp_half_form();
  if (fa && fb) {
    int c = fa->second == fb->second ? 0 : (fa->second < fb->second ? -1 : 1);
    return a.sign() > 0 ? c : -c;
  }
  if (!(a.kind() == BigReal::Kind::Computed && b.kind() == BigReal::Kind::Computed) && exactly_equal(a, b))
    return 0;
  return escalate([&](mpfr_prec_t p) -> std::optional<int> {
    Interval ea = a.enclose(p), eb = b.enclose(p);
    if (mpfr_less_p(ea.hi.get(), eb.lo.get())) return -1;
    if (mpfr_greater_p(ea.lo.get(), eb.hi.get())) return 1;
    return std::nullopt;
  });
}

int compare(const BigReal& a, const mpq_class& b) { return compare(a, BigReal(b)); }

Interval relative_error(const BigReal& rounded, const BigReal& exact, mpfr_prec_t prec) {
  if (exact.is_zero()) throw Error(ErrorKind::DomainError, "relative error against zero");
  Interval out(prec);
  if (exactly_equal(rounded, exact)) {
    mpfr_set_zero(out.lo.get(), 1);
    mpfr_set_zero(out.hi.get(), 1);
    return out;
  }
  mpfr_prec_t wp = prec + 32;
  Interval r = rounded.enclose(wp);
  Interval x = exact.enclose(wp);
  for (mpfr_prec_t p = wp; x.straddles_zero() && p <= kMaxOracleBits; p *= 2) x = exact.enclose(p * 2);
  Mpfr dlo(wp), dhi(wp);
  mpfr_sub(dlo.get(), r.lo.get(), x.hi.get(), MPFR_RNDD);
  mpfr_sub(dhi.get(), r.hi.get(), x.lo.get(), MPFR_RNDU);
  // quotient bounds over the corners of [dlo,dhi] / [xlo,xhi]
  const mpfr_srcptr ds[2] = {dlo.get(), dhi.get()};
  const mpfr_srcptr xs[2] = {x.lo.get(), x.hi.get()};
  Mpfr t(prec);
  bool first = true;
  for (auto d : ds) {
    for (auto xv : xs) {
      mpfr_div(t.get(), d, xv, MPFR_RNDD);
      if (first || mpfr_less_p(t.get(), out.lo.get())) mpfr_set(out.lo.get(), t.get(), MPFR_RNDD);
      mpfr_div(t.get(), d, xv, MPFR_RNDU);
      if (first || mpfr_greater_p(t.get(), out.hi.get())) mpfr_set(out.hi.get(), t.get(), MPFR_RNDU);
      first = false;
    }
  }
  return out;
}

}  // namespace takum
