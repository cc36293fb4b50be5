#pragma once

#include <string>

#include "takum/oracle.hpp"

namespace takum {

// Correctly rounded (ties to even) scientific notation with `digits`
// significant digits, e.g. "6.62607126e-34"; zero prints as "0".
std::string to_decimal(const BigReal& x, int digits);
// Rounds to digits + 1 first, then to digits (ties to even on the exact
// intermediate string). Reproduces the published constant tables.
std::string to_decimal_two_step(const BigReal& x, int digits);
// Shortest scientific string whose 80-bit rounding matches x's 80-bit rounding.
std::string to_shortest(const BigReal& x);

}  // namespace takum
