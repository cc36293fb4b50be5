#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "takum/codec.hpp"
#include "takum/ieee.hpp"
#include "takum/oracle.hpp"

namespace takum {

// Fraction of IEEE bit strings that are redundant (NaN multiplicity, signed
// zero) or encode values outside takum's dynamic range.
mpq_class ieee_waste_ratio(int exponent_bits, int fraction_bits, bool subnormals);
mpq_class posit_waste_ratio(unsigned n);

// Mantissa bit count of a finite takum at width n >= 12, from its value alone.
int mantissa_bit_count(const TakumValue& x, unsigned n);
// Same formula on an arbitrary real inside the dynamic range.
int mantissa_bit_count(const BigReal& x, unsigned n);
// Lower bound on the mantissa bit count of round(x, n).
int mantissa_bit_count_lower_bound(const BigReal& x, unsigned n);

// sqrt(e)^(2^(-p-1)) - 1
BigReal lambda(int p);
// 2^(-n_f-1)
mpq_class epsilon(int fraction_bits);

enum class CodingScheme { Takum, Posit, EliasGamma, EliasDelta };
CodingScheme parse_coding_scheme(std::string_view name);
// Bits spent on the exponent part of 2^v (posit) or sqrt(e)^v (takum), v >= 0.
int coding_cost(CodingScheme scheme, int v);
// Reference: same costs measured by running the encoders and counting field bits.
int coding_cost_by_encoding(CodingScheme scheme, int v);

struct DynamicRange {
  BigReal min_positive;
  BigReal max_positive;
};
DynamicRange takum_dynamic_range(unsigned n);
DynamicRange posit_dynamic_range(unsigned n);
// min_positive includes subnormals when the format has them
DynamicRange ieee_dynamic_range(const FormatDescriptor& fd);

// 10^(num/den) as an exact rational or an enclosed irrational.
BigReal pow10_rational(long num, long den);

// Precision bound in bits near x > 0: -log2 lambda(p) of round(x) for takums,
// -log2 of the largest relative rounding error in the gap around x for posits
// and IEEE formats. 0 where x falls outside the representable range.
double error_bound_bits(std::string_view format, const BigReal& x);
// Columns of error_bounds.csv.
const std::vector<std::string>& error_bound_formats();
// Header "log10_x,<format>..." sampled at log10(x) = k / per_decade over [lo, hi].
std::string error_bounds_csv(int lo, int hi, int per_decade);

}  // namespace takum
