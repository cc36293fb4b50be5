#include "takum/ieee.hpp"

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

void require_codec(const FormatDescriptor& fd) {
  if (fd.width() > 64 || fd.exponent_bits < 2 || fd.fraction_bits < 1)
    throw Error(ErrorKind::UnsupportedFormat, fd.name + ": codec needs 2 <= n_e and width <= 64");
}

// magnitude of a positive finite payload (sign bit clear)
mpq_class magnitude(const FormatDescriptor& fd, std::uint64_t p) {
  const std::uint64_t fmask = width_mask(static_cast<unsigned>(fd.fraction_bits));
  std::uint64_t frac = p & fmask;
  long ef = static_cast<long>(p >> fd.fraction_bits);
  if (ef == 0) return mpq_class(to_mpz(static_cast<i128>(frac))) * pow2(fd.emin() - fd.fraction_bits);
  return mpq_class(to_mpz(static_cast<i128>(frac | (fmask + 1)))) * pow2(ef - fd.bias() - fd.fraction_bits);
}

}  // namespace

const std::vector<FormatDescriptor>& ieee_formats() {
  static const std::vector<FormatDescriptor> formats = {
      {"float8", 4, 3, true},    {"float16", 5, 10, true},   {"bfloat16", 8, 7, false},
      {"TF32", 8, 10, false},    {"float32", 8, 23, true},   {"float64", 11, 52, true},
      {"float128", 15, 112, true}, {"float256", 19, 236, true},
  };
  return formats;
}

std::optional<FormatDescriptor> ieee_format(std::string_view name) {
  for (const auto& f : ieee_formats())
    if (f.name == name) return f;
  return std::nullopt;
}

std::uint64_t ieee_nan(const FormatDescriptor& fd) {
  require_codec(fd);
  const std::uint64_t emask = width_mask(static_cast<unsigned>(fd.exponent_bits));
  return (emask << fd.fraction_bits) | (std::uint64_t{1} << (fd.fraction_bits - 1));
}

IeeeValue ieee_decode(const FormatDescriptor& fd, std::uint64_t payload) {
  require_codec(fd);
  const unsigned w = static_cast<unsigned>(fd.width());
  if (payload & ~width_mask(w)) throw Error(ErrorKind::OutOfRange, "payload exceeds format width");
  IeeeValue v;
  v.sign = static_cast<int>(payload >> (w - 1)) & 1;
  const std::uint64_t mag = payload & width_mask(w - 1);
  const std::uint64_t emask = width_mask(static_cast<unsigned>(fd.exponent_bits));
  const std::uint64_t ef = mag >> fd.fraction_bits;
  const std::uint64_t frac = mag & width_mask(static_cast<unsigned>(fd.fraction_bits));
  if (ef == emask) {
    v.kind = frac ? IeeeValue::Kind::NaN : IeeeValue::Kind::Infinite;
    return v;
  }
  if (mag == 0 || (ef == 0 && !fd.subnormals)) {
    v.kind = IeeeValue::Kind::Zero;
    return v;
  }
  v.kind = IeeeValue::Kind::Finite;
  v.value = magnitude(fd, mag);
  if (v.sign) v.value = -v.value;
  return v;
}

mpq_class ieee_max(const FormatDescriptor& fd) {
  return (2 - pow2(-fd.fraction_bits)) * pow2(fd.emax());
}
mpq_class ieee_normal_min(const FormatDescriptor& fd) { return pow2(fd.emin()); }
mpq_class ieee_subnormal_min(const FormatDescriptor& fd) {
  return fd.subnormals ? pow2(fd.emin() - fd.fraction_bits) : ieee_normal_min(fd);
}

std::uint64_t ieee_round(const FormatDescriptor& fd, const BigReal& x) {
  require_codec(fd);
  const unsigned w = static_cast<unsigned>(fd.width());
  const std::uint64_t sign = x.sign() < 0 ? std::uint64_t{1} << (w - 1) : 0;
  if (x.is_zero()) return 0;
  BigReal a = x.abs();
  const std::uint64_t inf = width_mask(static_cast<unsigned>(fd.exponent_bits)) << fd.fraction_bits;
  const mpq_class overflow = (2 - pow2(-fd.fraction_bits - 1)) * pow2(fd.emax());
  if (compare(a, overflow) >= 0) return sign | inf;
  const std::uint64_t maxfin = inf - 1;
  auto value = [&fd](std::uint64_t p) { return magnitude(fd, p); };
  std::uint64_t p;
  mpq_class smallest = magnitude(fd, 1);
  if (compare(a, smallest) < 0) {
    p = detail::nearest_pattern(a, 0, mpq_class(0), smallest / 2);
  } else {
    std::uint64_t lo = detail::floor_pattern(a, 1, maxfin, value);
    if (lo == maxfin) {
      p = maxfin;  // below the overflow threshold
    } else {
      mpq_class vlo = value(lo);
      p = detail::nearest_pattern(a, lo, vlo, (vlo + value(lo + 1)) / 2);
    }
  }
  if (!fd.subnormals && (p >> fd.fraction_bits) == 0) p = 0;
  return sign | p;
}

std::string ieee_dump(const FormatDescriptor& fd, std::uint64_t payload) {
  IeeeValue v = ieee_decode(fd, payload);
  std::ostringstream os;
  os << fd.name << ":" << hex_payload(payload) << "\n";
  switch (v.kind) {
    case IeeeValue::Kind::Zero: os << "value=" << (v.sign ? "-0" : "0") << "\n"; break;
    case IeeeValue::Kind::Infinite: os << "value=" << (v.sign ? "-inf" : "inf") << "\n"; break;
    case IeeeValue::Kind::NaN: os << "value=NaN\n"; break;
    case IeeeValue::Kind::Finite: os << "value=" << to_shortest(BigReal(v.value)) << "\n"; break;
  }
  return os.str();
}

}  // namespace takum
