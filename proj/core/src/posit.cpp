#include "takum/posit.hpp"

#include <algorithm>
#include <sstream>

#include "monotone.hpp"
#include "takum/bits.hpp"
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

}  // namespace

PositBits PositBits::make(unsigned width, std::uint64_t payload) {
  check_width(width);
  if (payload & ~width_mask(width)) throw Error(ErrorKind::OutOfRange, "posit payload exceeds width");
  return PositBits{width, payload};
}

PositDecoded posit_decode(const PositBits& b) {
  PositDecoded out;
  const unsigned n = b.width;
  if (b.is_zero()) return out;
  if (b.is_nar()) {
    out.kind = PositDecoded::Kind::NaR;
    out.fields.sign = 1;
    return out;
  }
  // Bits after the sign, MSB first, with ghost zeros past the end.
  auto bit = [&](int i) -> unsigned {  // i = 0 is the bit right after S
    int pos = static_cast<int>(n) - 2 - i;
    return pos >= 0 ? static_cast<unsigned>(b.payload >> pos) & 1u : 0u;
  };
  PositFields& f = out.fields;
  f.sign = static_cast<unsigned>(b.payload >> (n - 1)) & 1u;
  f.run_bit = bit(0);
  int k = 0;
  while (bit(k) == f.run_bit && k < static_cast<int>(n)) ++k;
  f.run_length = k;
  f.regime = f.run_bit ? k - 1 : -k;
  int e_pos = k + 1;  // after the terminator
  f.exponent_bits = static_cast<int>(2 * bit(e_pos) + bit(e_pos + 1));
  f.fraction_bits = std::max(0, static_cast<int>(n) - k - 4);
  std::uint64_t frac = 0;
  for (int i = 0; i < f.fraction_bits; ++i) frac = (frac << 1) | bit(e_pos + 2 + i);
  f.fraction = frac;
  f.fraction_value = Dyadic::from_fixed(static_cast<i128>(frac), f.fraction_bits);
  int s = static_cast<int>(f.sign);
  f.actual_exponent = (s ? -1 : 1) * (4 * f.regime + f.exponent_bits + s);
  out.kind = PositDecoded::Kind::Finite;
  out.value = (mpq_class(1 - 3 * s) + f.fraction_value.to_mpq()) * pow2(f.actual_exponent);
  return out;
}

mpq_class posit_value(const PositBits& b) {
  PositDecoded d = posit_decode(b);
  if (d.kind == PositDecoded::Kind::NaR) throw Error(ErrorKind::NotFinite, "posit NaR");
  return d.value;
}

mpq_class posit_maxpos(unsigned n) { return posit_value(PositBits::make(n, width_mask(n - 1))); }
mpq_class posit_minpos(unsigned n) { return posit_value(PositBits::make(n, 1)); }

PositBits posit_negate(const PositBits& b) {
  return PositBits::make(b.width, (~b.payload + 1) & width_mask(b.width));
}

PositBits posit_round(const BigReal& x, unsigned n) {
  check_width(n);
  if (n > 63) throw Error(ErrorKind::UnsupportedFormat, "posit rounding supports n <= 63");
  if (x.is_zero()) return PositBits::make(n, 0);
  const std::uint64_t maxp = width_mask(n - 1);
  BigReal a = x.abs();
  std::uint64_t p;
  if (compare(a, posit_maxpos(n)) >= 0) {
    p = maxp;
  } else if (compare(a, posit_minpos(n)) <= 0) {
    p = 1;
  } else {
    auto value = [n](std::uint64_t q) { return posit_value(PositBits::make(n, q)); };
    std::uint64_t lo = detail::floor_pattern(a, 1, maxp, value);
    // the (n+1)-bit pattern lo.1 is the bit-string midpoint
    mpq_class mid = posit_value(PositBits::make(n + 1, (lo << 1) | 1));
    p = detail::nearest_pattern(a, lo, value(lo), mid);
  }
  PositBits out = PositBits::make(n, p);
  return x.sign() < 0 ? posit_negate(out) : out;
}

std::string posit_dump(const PositBits& b) {
  PositDecoded d = posit_decode(b);
  std::ostringstream os;
  os << "posit" << b.width << ":" << hex_payload(b.payload) << "\n";
  switch (d.kind) {
    case PositDecoded::Kind::Zero: os << "value=0\n"; break;
    case PositDecoded::Kind::NaR: os << "value=NaR\n"; break;
    case PositDecoded::Kind::Finite: {
      const PositFields& f = d.fields;
      os << "S=" << f.sign << " k=" << f.run_length << " r=" << f.regime << " e=" << f.exponent_bits
         << " p=" << f.fraction_bits << " f=" << f.fraction_value.to_string() << " exp=" << f.actual_exponent << "\n";
      os << "value=" << to_shortest(BigReal(d.value)) << "\n";
      break;
    }
  }
  return os.str();
}

}  // namespace takum
