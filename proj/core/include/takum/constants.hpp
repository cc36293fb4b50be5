#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "takum/oracle.hpp"

namespace takum {

struct NamedConstant {
  std::string name;
  std::string symbol;  // ASCII key used on the command line
  std::string value;   // exact decimal
  int digits = 0;      // significant digits of the ground truth
  BigReal exact() const { return BigReal::from_decimal(value); }
};

// h, k, e, c, dnu, NA (SI-defining) then Lambda, M.
const std::vector<NamedConstant>& named_constants();
const NamedConstant& named_constant(std::string_view symbol);

// Formats of the comparison tables, in row order.
const std::vector<std::string>& constant_table_formats();

// Rounds into `format` (takum<n>, posit<n> or an IEEE name) and prints the
// decoded value at the constant's digit count. Underflow to zero prints "0",
// overflow to infinity prints "∞".
std::string represent(const NamedConstant& c, std::string_view format);

// Header "format,<symbol>..." then one row per table format.
std::string constants_csv(const std::vector<NamedConstant>& cs);

}  // namespace takum
