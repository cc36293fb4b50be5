#include "takum/analysis.hpp"

#include "takum/error.hpp"
#include "takum/posit.hpp"

#include <cmath>
#include <cstdio>

#include "monotone.hpp"

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

int floor_log2(long v) {
  int r = -1;
  while (v > 0) {
    v >>= 1;
    ++r;
  }
  return r;
}

// floor(2 ln|x| * sign(x)), i.e. the characteristic of x's encoding
long characteristic_of(const BigReal& x) {
  if (auto f = x.exp_half_form()) {
    Dyadic v = f->first ? -f->second : f->second;
    return static_cast<long>(v.floor());
  }
  int s = x.sign() < 0 ? -1 : 1;
  return escalate([&](mpfr_prec_t p) -> std::optional<long> {
    Interval iv = x.enclose_log(p);
    if (s < 0) {
      mpfr_swap(iv.lo.get(), iv.hi.get());
      mpfr_neg(iv.lo.get(), iv.lo.get(), MPFR_RNDD);
      mpfr_neg(iv.hi.get(), iv.hi.get(), MPFR_RNDU);
    }
    mpfr_floor(iv.lo.get(), iv.lo.get());
    mpfr_floor(iv.hi.get(), iv.hi.get());
    if (!mpfr_equal_p(iv.lo.get(), iv.hi.get())) return std::nullopt;
    return mpfr_get_si(iv.lo.get(), MPFR_RNDN);
  });
}

}  // namespace

mpq_class ieee_waste_ratio(int ne, int nf, bool subnormals) {
  if (ne < 2 || nf < 0) throw Error(ErrorKind::DomainError, "need n_e >= 2 and n_f >= 0");
  bool wide = ne >= 9;
  mpq_class count = 1;
  if (wide) count += pow2(ne) - 370;
  if (wide || !subnormals) count += 1;
  return count * pow2(-ne) - 3 * pow2(-1 - ne - nf);
}

mpq_class posit_waste_ratio(unsigned n) {
  if (n < 1) throw Error(ErrorKind::DomainError, "n must be positive");
  return n <= 47 ? mpq_class(0) : pow2(-46);
}

int mantissa_bit_count(const TakumValue& x, unsigned n) {
  if (!x.is_finite()) throw Error(ErrorKind::NotFinite, "mantissa_bit_count needs a finite takum");
  return mantissa_bit_count(x.to_real(), n);
}

int mantissa_bit_count(const BigReal& x, unsigned n) {
  if (n < 12) throw Error(ErrorKind::DomainError, "formula needs n >= 12");
  if (x.is_zero()) throw Error(ErrorKind::NotFinite, "zero has no mantissa");
  long c = characteristic_of(x);
  long arg = c >= 0 ? c + 1 : -c;
  return static_cast<int>(n) - 5 - floor_log2(arg);
}

int mantissa_bit_count_lower_bound(const BigReal& x, unsigned n) {
  if (n < 12) throw Error(ErrorKind::DomainError, "formula needs n >= 12");
  if (x.is_zero()) throw Error(ErrorKind::NotFinite, "zero has no mantissa");
  long c = characteristic_of(x);
  long arg = c >= 0 ? c + 1 : -c;
  return static_cast<int>(n) - 6 - floor_log2(arg);
}

BigReal lambda(int p) {
  if (p < 0) throw Error(ErrorKind::DomainError, "p must be non-negative");
  return BigReal::exp_half(0, Dyadic::from_fixed(1, p + 1)) - BigReal::from_int(1);
}

mpq_class epsilon(int fraction_bits) {
  if (fraction_bits < 0) throw Error(ErrorKind::DomainError, "n_f must be non-negative");
  return pow2(-fraction_bits - 1);
}

CodingScheme parse_coding_scheme(std::string_view name) {
  if (name == "takum") return CodingScheme::Takum;
  if (name == "posit") return CodingScheme::Posit;
  if (name == "elias_gamma") return CodingScheme::EliasGamma;
  if (name == "elias_delta") return CodingScheme::EliasDelta;
  throw Error(ErrorKind::UnknownFormat, "unknown coding scheme: " + std::string(name));
}

int coding_cost(CodingScheme scheme, int v) {
  if (v < 0) throw Error(ErrorKind::DomainError, "coding cost needs v >= 0");
  switch (scheme) {
    case CodingScheme::Takum:
      if (v > 254) throw Error(ErrorKind::OutOfRange, "takum characteristic tops out at 254");
      return 4 + floor_log2(v + 1);
    case CodingScheme::Posit:
      return v / 4 + 4;
    case CodingScheme::EliasGamma:
      return 2 * floor_log2(v + 1) + 1;
    case CodingScheme::EliasDelta: {
      int len = floor_log2(v + 1);
      return len + 2 * floor_log2(len + 1) + 1;
    }
  }
  return 0;
}

int coding_cost_by_encoding(CodingScheme scheme, int v) {
  if (v < 0) throw Error(ErrorKind::DomainError, "coding cost needs v >= 0");
  switch (scheme) {
    case CodingScheme::Takum: {
      // D, R and C bits of sqrt(e)^v
      TakumEncoding e = encode_exact(0, Dyadic(v));
      return 4 + e.regime();
    }
    case CodingScheme::Posit: {
      // regime run + terminator + 2 exponent bits of 2^v, read off a wide posit;
      // only costs up to 62 bits (v <= 235) fit after the sign of a posit63
      const unsigned n = 63;
      PositBits b = posit_round(BigReal(pow2(v)), n);
      PositDecoded d = posit_decode(b);
      if (d.value != pow2(v)) throw Error(ErrorKind::OutOfRange, "2^v not representable in posit63");
      return d.fields.run_length + 1 + 2;
    }
    case CodingScheme::EliasGamma: {
      // unary length prefix followed by the binary digits of v + 1
      std::string bits;
      for (unsigned x = static_cast<unsigned>(v) + 1; x; x >>= 1) bits.insert(bits.begin(), char('0' + (x & 1)));
      return static_cast<int>(bits.size() - 1 + bits.size());
    }
    case CodingScheme::EliasDelta: {
      std::string bits;
      for (unsigned x = static_cast<unsigned>(v) + 1; x; x >>= 1) bits.insert(bits.begin(), char('0' + (x & 1)));
      int len = static_cast<int>(bits.size());
      return coding_cost_by_encoding(CodingScheme::EliasGamma, len - 1) + len - 1;
    }
  }
  return 0;
}

DynamicRange takum_dynamic_range(unsigned n) {
  check_width(n);
  return {decode_value(TakumBits::make(n, 1)).to_real(),
          decode_value(TakumBits::make(n, width_mask(n - 1))).to_real()};
}

DynamicRange posit_dynamic_range(unsigned n) {
  check_width(n);
  return {BigReal(posit_minpos(n)), BigReal(posit_maxpos(n))};
}

DynamicRange ieee_dynamic_range(const FormatDescriptor& fd) {
  return {BigReal(ieee_subnormal_min(fd)), BigReal(ieee_max(fd))};
}

BigReal pow10_rational(long num, long den) {
  if (den <= 0) throw Error(ErrorKind::DomainError, "denominator must be positive");
  mpq_class t(num, den);
  t.canonicalize();
  if (t.get_den() == 1) {
    mpz_class p;
    long k = t.get_num().get_si();
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(k < 0 ? -k : k));
    return BigReal(k < 0 ? mpq_class(1, p) : mpq_class(p));
  }
  return BigReal::computed(1, [t](Interval& iv, mpfr_prec_t prec) {
    Mpfr lo(prec + 16), hi(prec + 16);
    mpfr_set_q(lo.get(), t.get_mpq_t(), MPFR_RNDD);
    mpfr_set_q(hi.get(), t.get_mpq_t(), MPFR_RNDU);
    mpfr_exp10(iv.lo.get(), lo.get(), MPFR_RNDD);
    mpfr_exp10(iv.hi.get(), hi.get(), MPFR_RNDU);
  });
}

namespace {

double neg_log2(const mpq_class& q) {
  long e = 0;
  double d = mpf_get_d_2exp(&e, mpf_class(q, 128).get_mpf_t());
  return -(std::log2(d) + static_cast<double>(e));
}

// -log2((b - a) / (a + b)) for the consecutive values a <= x < b.
double gap_bound(const BigReal& x, std::uint64_t lo, std::uint64_t hi,
                 const std::function<mpq_class(std::uint64_t)>& value) {
  if (compare(x, value(lo)) < 0 || compare(x, value(hi)) >= 0) return 0.0;
  std::uint64_t p = detail::floor_pattern(x, lo, hi, value);
  mpq_class a = value(p), b = value(p + 1);
  return std::max(0.0, neg_log2((b - a) / (a + b)));
}

std::optional<unsigned> width_after(std::string_view name, std::string_view prefix) {
  if (name.substr(0, prefix.size()) != prefix) return std::nullopt;
  std::string rest(name.substr(prefix.size()));
  if (rest.empty() || rest.size() > 2 || rest.find_first_not_of("0123456789") != std::string::npos)
    return std::nullopt;
  return static_cast<unsigned>(std::stoul(rest));
}

}  // namespace

double error_bound_bits(std::string_view format, const BigReal& x) {
  if (x.sign() <= 0) throw Error(ErrorKind::DomainError, "error bounds need x > 0");
  if (auto n = width_after(format, "takum")) {
    check_width(*n);
    TakumBits lo = TakumBits::make(*n, 1), hi = TakumBits::make(*n, width_mask(*n - 1));
    if (compare(x, decode_value(lo).to_real()) < 0 || compare(x, decode_value(hi).to_real()) > 0) return 0.0;
    int p = decode(round(x, *n)).fields.mantissa_bits;
    Interval iv = lambda(p).enclose(64);
    return -std::log2(iv.hi.to_double());
  }
  if (auto n = width_after(format, "posit")) {
    check_width(*n);
    unsigned w = *n;
    return gap_bound(x, 1, width_mask(w - 1), [w](std::uint64_t q) { return posit_value(PositBits::make(w, q)); });
  }
  if (auto fd = ieee_format(format)) {
    FormatDescriptor f = *fd;
    std::uint64_t top = (width_mask(static_cast<unsigned>(f.exponent_bits)) << f.fraction_bits) - 1;
    std::uint64_t first = f.subnormals ? 1 : std::uint64_t{1} << f.fraction_bits;
    return gap_bound(x, first, top, [&f](std::uint64_t q) { return ieee_decode(f, q).value; });
  }
  throw Error(ErrorKind::UnknownFormat, "unknown format: " + std::string(format));
}

const std::vector<std::string>& error_bound_formats() {
  static const std::vector<std::string> list = {"takum8",  "posit8",  "float8",  "takum16", "posit16",
                                                "float16", "bfloat16", "takum32", "posit32", "float32",
                                                "takum64", "posit64", "float64"};
  return list;
}

std::string error_bounds_csv(int lo, int hi, int per_decade) {
  if (per_decade < 1 || lo > hi) throw Error(ErrorKind::DomainError, "bad sampling grid");
  std::string out = "log10_x";
  for (const auto& f : error_bound_formats()) out += "," + f;
  out += '\n';
  char buf[64];
  for (long k = static_cast<long>(lo) * per_decade; k <= static_cast<long>(hi) * per_decade; ++k) {
    BigReal x = pow10_rational(k, per_decade);
    std::snprintf(buf, sizeof buf, "%.10g", static_cast<double>(k) / per_decade);
    out += buf;
    for (const auto& f : error_bound_formats()) {
      std::snprintf(buf, sizeof buf, ",%.17g", error_bound_bits(f, x));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

}  // namespace takum
