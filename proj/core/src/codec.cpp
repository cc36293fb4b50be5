#include "takum/codec.hpp"

#include <algorithm>
#include <sstream>

#include "takum/decimal.hpp"
#include "takum/error.hpp"

namespace takum {

namespace {

const Dyadic kMaxEll(255);

std::string binary(std::uint64_t v, int bits) {
  std::string s;
  for (int i = bits - 1; i >= 0; --i) s += ((v >> i) & 1) ? '1' : '0';
  return s;
}

class ExactSource final : public PatternSource {
 public:
  ExactSource(int sign_bit, const Dyadic& ell) : sign_(sign_bit), v_(sign_bit ? -ell : ell) {}
  int sign_bit() const override { return sign_; }
  i128 floor_scaled(int j) const override { return v_.floor_scaled(j); }
  bool exact_at(int j) const override { return v_.frac_bits() <= j; }

 private:
  int sign_;
  Dyadic v_;
};

// v = (-1)^S * 2 ln|x| for a real whose logarithm is transcendental.
class OracleSource final : public PatternSource {
 public:
  explicit OracleSource(BigReal x) : x_(std::move(x)), sign_(x_.sign() < 0 ? 1 : 0) {}
  int sign_bit() const override { return sign_; }
  i128 floor_scaled(int j) const override {
    return escalate([&](mpfr_prec_t p) -> std::optional<i128> {
      Interval iv = x_.enclose_log(std::max<mpfr_prec_t>(p, j + 48));
      if (sign_) {
        mpfr_swap(iv.lo.get(), iv.hi.get());
        mpfr_neg(iv.lo.get(), iv.lo.get(), MPFR_RNDD);
        mpfr_neg(iv.hi.get(), iv.hi.get(), MPFR_RNDU);
      }
      mpfr_mul_2si(iv.lo.get(), iv.lo.get(), j, MPFR_RNDD);
      mpfr_mul_2si(iv.hi.get(), iv.hi.get(), j, MPFR_RNDU);
      mpz_class a, b;
      mpfr_get_z(a.get_mpz_t(), iv.lo.get(), MPFR_RNDD);
      mpfr_get_z(b.get_mpz_t(), iv.hi.get(), MPFR_RNDD);
      if (a != b) return std::nullopt;
      return to_i128(a);
    });
  }
  bool exact_at(int) const override { return false; }

 private:
  BigReal x_;
  int sign_;
};

// l compared against the saturation bounds +-255.
Saturation saturation_of(const BigReal& x) {
  if (auto f = x.exp_half_form()) {
    if (f->second >= kMaxEll) return Saturation::AboveMax;
    if (f->second <= -kMaxEll) return Saturation::BelowMin;
    return Saturation::None;
  }
  return escalate([&](mpfr_prec_t p) -> std::optional<Saturation> {
    Interval iv = x.enclose_log(p);
    if (mpfr_cmp_si(iv.lo.get(), 255) >= 0) return Saturation::AboveMax;
    if (mpfr_cmp_si(iv.hi.get(), -255) <= 0) return Saturation::BelowMin;
    if (mpfr_cmp_si(iv.lo.get(), -255) > 0 && mpfr_cmp_si(iv.hi.get(), 255) < 0) return Saturation::None;
    return std::nullopt;
  });
}

std::shared_ptr<const PatternSource> source_for(const BigReal& x) {
  if (auto f = x.exp_half_form()) return std::make_shared<ExactSource>(f->first, f->second);
  return std::make_shared<OracleSource>(x);
}

// Leading i bits of the infinite string S, D, R, C, M, ...
u128 raw_prefix(const PatternSource& src, unsigned i) {
  auto c = static_cast<int>(src.floor_scaled(0));
  CharacteristicFields cf = characteristic_fields(c);
  int r = cf.regime;
  u128 head = (static_cast<u128>(src.sign_bit()) << (4 + r)) | (static_cast<u128>(cf.direction) << (3 + r)) |
              (static_cast<u128>(cf.regime_bits) << r) | cf.characteristic_bits;
  int len = 5 + r;
  if (static_cast<int>(i) <= len) return head >> (len - static_cast<int>(i));
  int k = static_cast<int>(i) - len;
  if (k > 115) throw Error(ErrorKind::OutOfRange, "prefix too long");
  i128 mbits = src.floor_scaled(k) - (static_cast<i128>(c) << k);
  return (head << k) | static_cast<u128>(mbits);
}

}  // namespace

TakumValue TakumValue::finite(int sign_bit, const Dyadic& l) {
  if (l >= kMaxEll || l <= -kMaxEll) throw Error(ErrorKind::OutOfRange, "logarithmic value outside (-255, 255)");
  return TakumValue(Kind::Finite, sign_bit ? 1 : 0, l);
}

BigReal TakumValue::to_real() const {
  switch (kind_) {
    case Kind::Zero: return BigReal::zero();
    case Kind::NaR: throw Error(ErrorKind::NotFinite, "NaR has no real value");
    case Kind::Finite: return BigReal::exp_half(sign_, ell_);
  }
  return BigReal::zero();
}

TakumValue TakumValue::negated() const {
  if (kind_ != Kind::Finite) return *this;
  return finite(sign_ ^ 1, ell_);
}

CharacteristicFields characteristic_fields(int c) {
  if (c < -255 || c > 254) throw Error(ErrorKind::OutOfRange, "characteristic outside [-255, 254]");
  CharacteristicFields f{};
  if (c >= 0) {
    f.direction = 1;
    f.regime = bit_length(static_cast<u128>(c + 1)) - 1;
    f.regime_bits = static_cast<unsigned>(f.regime);
    f.characteristic_bits = static_cast<std::uint64_t>(c - (1 << f.regime) + 1);
  } else {
    f.direction = 0;
    f.regime = bit_length(static_cast<u128>(-c)) - 1;
    f.regime_bits = static_cast<unsigned>(7 - f.regime);
    f.characteristic_bits = static_cast<std::uint64_t>(c + (1 << (f.regime + 1)) - 1);
  }
  return f;
}

Decoded decode(const TakumBits& bits) {
  const unsigned n = bits.width;
  const unsigned w = std::max(n, 12u);
  const std::uint64_t pat = bits.payload << (w - n);
  DecodedFields f;
  f.sign = static_cast<unsigned>(pat >> (w - 1)) & 1u;
  f.direction = static_cast<unsigned>(pat >> (w - 2)) & 1u;
  f.regime_bits = static_cast<unsigned>(pat >> (w - 5)) & 7u;
  f.regime = f.direction ? static_cast<int>(f.regime_bits) : 7 - static_cast<int>(f.regime_bits);
  const int r = f.regime;
  f.characteristic_bits = (pat >> (w - 5 - static_cast<unsigned>(r))) & width_mask(static_cast<unsigned>(r));
  const int cbits = static_cast<int>(f.characteristic_bits);
  f.characteristic = f.direction ? (1 << r) - 1 + cbits : -(1 << (r + 1)) + 1 + cbits;
  const int q = static_cast<int>(w) - 5 - r;  // mantissa slots at the padded width
  f.mantissa_bits = std::max(0, static_cast<int>(n) - 5 - r);
  const std::uint64_t mw = pat & width_mask(static_cast<unsigned>(q));
  f.mantissa = mw >> (q - f.mantissa_bits);
  f.mantissa_value = Dyadic::from_fixed(static_cast<i128>(f.mantissa), f.mantissa_bits);
  Dyadic v = Dyadic(f.characteristic) + f.mantissa_value;
  f.ell = f.sign ? -v : v;

  if (bits.payload == 0) return {TakumValue::zero(), f};
  if (bits.is_nar()) return {TakumValue::nar(), f};
  return {TakumValue::finite(static_cast<int>(f.sign), f.ell), f};
}

TakumValue decode_value(const TakumBits& bits) { return decode(bits).value; }

BigReal FloatTriple::to_real() const {
  if (fraction.sign() < 0 || compare(fraction, BigReal::from_int(1)) >= 0)
    throw Error(ErrorKind::DomainError, "fraction must lie in [0, 1)");
  mpq_class p2(1);
  if (exponent >= 0) {
    mpq_mul_2exp(p2.get_mpq_t(), p2.get_mpq_t(), static_cast<unsigned long>(exponent));
  } else {
    mpq_div_2exp(p2.get_mpq_t(), p2.get_mpq_t(), static_cast<unsigned long>(-exponent));
  }
  BigReal mag = (BigReal::from_int(1) + fraction) * BigReal(p2);
  return sign ? -mag : mag;
}

TakumEncoding::TakumEncoding(std::shared_ptr<const PatternSource> src) : src_(std::move(src)) {
  sign_ = static_cast<unsigned>(src_->sign_bit());
  c_ = static_cast<int>(src_->floor_scaled(0));
  fields_ = characteristic_fields(c_);
}

std::optional<int> TakumEncoding::mantissa_bits(int probe_limit) const {
  for (int p = 0; p <= probe_limit; ++p)
    if (src_->exact_at(p)) return p;
  return std::nullopt;
}

u128 TakumEncoding::mantissa_prefix(int k) const {
  if (k <= 0) return 0;
  return static_cast<u128>(src_->floor_scaled(k) - (static_cast<i128>(c_) << k));
}

u128 TakumEncoding::truncate_raw(unsigned i) const { return raw_prefix(*src_, i); }

TakumEncoding encode_exact(int sign_bit, const Dyadic& l) {
  if (l >= kMaxEll || l <= -kMaxEll) throw Error(ErrorKind::OutOfRange, "outside the open takum range");
  return TakumEncoding(std::make_shared<ExactSource>(sign_bit, l));
}

TakumEncoding encode_exact(const BigReal& x) {
  if (x.is_zero()) throw Error(ErrorKind::OutOfRange, "zero has no logarithmic encoding");
  if (saturation_of(x) != Saturation::None) throw Error(ErrorKind::OutOfRange, "outside the open takum range");
  return TakumEncoding(source_for(x));
}

TakumEncoding encode_exact(const FloatTriple& x) { return encode_exact(x.to_real()); }

TakumBits encode_minimal(const TakumValue& v) {
  if (v.is_zero()) return TakumBits::make(2, 0);
  if (v.is_nar()) return TakumBits::make(2, 2);
  TakumEncoding e = encode_exact(v.sign_bit(), v.ell());
  int p = *e.mantissa_bits();
  unsigned w = std::max(2u, static_cast<unsigned>(5 + e.regime() + p));
  check_width(w);
  return TakumBits::make(w, static_cast<std::uint64_t>(e.truncate_raw(w)));
}

FloatTriple decode_to_float(const TakumValue& v) {
  if (!v.is_finite()) throw Error(ErrorKind::NotFinite, "decode_to_float needs a finite takum");
  BigReal mag = BigReal::exp_half(0, v.ell());
  long h = 0;
  if (!v.ell().is_zero()) {
    h = escalate([&](mpfr_prec_t p) -> std::optional<long> {
      Interval iv = mag.enclose(p);
      Mpfr a(p), b(p);
      mpfr_log2(a.get(), iv.lo.get(), MPFR_RNDD);
      mpfr_log2(b.get(), iv.hi.get(), MPFR_RNDU);
      mpfr_floor(a.get(), a.get());
      mpfr_floor(b.get(), b.get());
      if (!mpfr_equal_p(a.get(), b.get())) return std::nullopt;
      return mpfr_get_si(a.get(), MPFR_RNDN);
    });
  }
  mpq_class scale(1);
  if (h >= 0) {
    mpq_div_2exp(scale.get_mpq_t(), scale.get_mpq_t(), static_cast<unsigned long>(h));
  } else {
    mpq_mul_2exp(scale.get_mpq_t(), scale.get_mpq_t(), static_cast<unsigned long>(-h));
  }
  FloatTriple t;
  t.sign = v.sign_bit();
  t.exponent = h;
  t.fraction = mag * BigReal(scale) - BigReal::from_int(1);
  return t;
}

TakumBits round_pattern(const PatternSource& src, Saturation sat, unsigned n) {
  check_width(n);
  const std::uint64_t mask = width_mask(n);
  const std::uint64_t nar = std::uint64_t{1} << (n - 1);
  const int s = src.sign_bit();
  if (sat == Saturation::AboveMax) return TakumBits::make(n, s ? (nar | 1) : nar - 1);
  if (sat == Saturation::BelowMin) return TakumBits::make(n, s ? mask : 1);
  u128 t = raw_prefix(src, n + 1);
  std::uint64_t out = static_cast<std::uint64_t>((t >> 1) + (t & 1)) & mask;
  if (out == 0) out = s ? mask : 1;
  if (out == nar) out = s ? nar + 1 : nar - 1;
  return TakumBits::make(n, out);
}

TakumBits round(const BigReal& x, unsigned n) {
  check_width(n);
  if (x.is_zero()) return TakumBits::zero(n);
  Saturation sat = saturation_of(x);
  if (sat != Saturation::None) {
    ExactSource sign_only(x.sign() < 0 ? 1 : 0, Dyadic());
    return round_pattern(sign_only, sat, n);
  }
  return round_pattern(*source_for(x), Saturation::None, n);
}

TakumBits round(const TakumValue& v, unsigned n) {
  check_width(n);
  if (v.is_nar()) return TakumBits::nar(n);
  if (v.is_zero()) return TakumBits::zero(n);
  return round_pattern(ExactSource(v.sign_bit(), v.ell()), Saturation::None, n);
}

TakumBits round_nar(unsigned n) { return TakumBits::nar(n); }

TakumBits truncate(const TakumBits& b, unsigned i) {
  check_width(i);
  std::uint64_t p = i >= b.width ? b.payload << (i - b.width) : b.payload >> (b.width - i);
  return TakumBits::make(i, p);
}

TakumBits truncate(const TakumEncoding& e, unsigned i) {
  check_width(i);
  return TakumBits::make(i, static_cast<std::uint64_t>(e.truncate_raw(i)));
}

TakumBits negate_bits(const TakumBits& b) {
  return TakumBits::make(b.width, (~b.payload + 1) & width_mask(b.width));
}

TakumBits invert_bits(const TakumBits& b) {
  if (b.is_nar()) throw Error(ErrorKind::IsNaR, "NaR has no reciprocal");
  const std::uint64_t low = width_mask(b.width - 1);
  return TakumBits::make(b.width, ((b.payload ^ low) + 1) & width_mask(b.width));
}

TakumBits flip_sign_bit(const TakumBits& b) {
  return TakumBits::make(b.width, b.payload ^ (std::uint64_t{1} << (b.width - 1)));
}

std::strong_ordering compare(const TakumBits& a, const TakumBits& b) {
  if (a.width != b.width) throw Error(ErrorKind::WidthMismatch, "compare needs equal widths");
  return a.as_signed() <=> b.as_signed();
}

TakumBits resize(const TakumBits& b, unsigned n2) {
  check_width(n2);
  if (n2 >= b.width) return truncate(b, n2);
  return round(decode_value(b), n2);
}

std::string dump(const TakumBits& bits) {
  Decoded d = decode(bits);
  const DecodedFields& f = d.fields;
  std::ostringstream os;
  os << to_text(bits) << "\n";
  os << "S=" << f.sign << " D=" << f.direction << " R=" << binary(f.regime_bits, 3) << " r=" << f.regime
     << " C=" << binary(f.characteristic_bits, f.regime) << " c=" << f.characteristic << " p=" << f.mantissa_bits
     << " M=" << binary(f.mantissa, f.mantissa_bits) << " m=" << f.mantissa_value.to_string()
     << " l=" << f.ell.to_string() << "\n";
  os << "value=";
  switch (d.value.kind()) {
    case TakumValue::Kind::Zero: os << "0"; break;
    case TakumValue::Kind::NaR: os << "NaR"; break;
    case TakumValue::Kind::Finite: os << to_shortest(d.value.to_real()); break;
  }
  os << "\n";
  return os.str();
}

}  // namespace takum
