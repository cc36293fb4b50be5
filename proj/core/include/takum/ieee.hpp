#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "takum/oracle.hpp"

namespace takum {

struct FormatDescriptor {
  std::string name;
  int exponent_bits = 0;  // n_e
  int fraction_bits = 0;  // n_f
  bool subnormals = true;

  int width() const { return 1 + exponent_bits + fraction_bits; }
  int bias() const { return (1 << (exponent_bits - 1)) - 1; }
  int emin() const { return 1 - bias(); }
  int emax() const { return bias(); }
};

// float8(4,3), float16, bfloat16, TF32, float32, float64, float128, float256
const std::vector<FormatDescriptor>& ieee_formats();
std::optional<FormatDescriptor> ieee_format(std::string_view name);

struct IeeeValue {
  enum class Kind { Zero, Infinite, NaN, Finite };
  Kind kind = Kind::Zero;
  int sign = 0;
  mpq_class value;  // exact for Finite (signed)
};

// Total width must be <= 64.
IeeeValue ieee_decode(const FormatDescriptor& fd, std::uint64_t payload);
std::uint64_t ieee_round(const FormatDescriptor& fd, const BigReal& x);
std::uint64_t ieee_nan(const FormatDescriptor& fd);

mpq_class ieee_max(const FormatDescriptor& fd);
mpq_class ieee_normal_min(const FormatDescriptor& fd);
mpq_class ieee_subnormal_min(const FormatDescriptor& fd);  // normal min without subnormals

std::string ieee_dump(const FormatDescriptor& fd, std::uint64_t payload);

}  // namespace takum
