#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace takum {

using i128 = __int128;
using u128 = unsigned __int128;

// Exact value num * 2^exp, kept normalized (num odd, or num == 0 and exp == 0).
// Numerators stay well inside 128 bits for every quantity this library
// produces (|l| < 2^9 with at most ~70 fractional bits); overflow throws.
class Dyadic {
 public:
  constexpr Dyadic() = default;
  Dyadic(std::int64_t v) : Dyadic(static_cast<i128>(v), 0) {}  // NOLINT
  Dyadic(i128 num, int exp);

  // num / 2^frac_bits
  static Dyadic from_fixed(i128 num, int frac_bits) { return Dyadic(num, -frac_bits); }
  // Exact parse of "-15", "0.5", "1/8", "3.25e2"; throws unless the value is dyadic.
  static Dyadic parse(std::string_view text);
  static Dyadic from_mpq(const mpq_class& q);

  i128 numerator() const { return num_; }
  int exponent() const { return exp_; }
  int sign() const { return num_ > 0 ? 1 : (num_ < 0 ? -1 : 0); }
  bool is_zero() const { return num_ == 0; }
  bool is_integer() const { return exp_ >= 0; }
  // Number of fractional bits needed (0 for integers).
  int frac_bits() const { return exp_ < 0 ? -exp_ : 0; }

  // floor(v * 2^j); j may be negative.
  i128 floor_scaled(int j) const;
  std::int64_t floor() const { return static_cast<std::int64_t>(floor_scaled(0)); }
  Dyadic frac() const { return *this - Dyadic(floor()); }

  Dyadic operator-() const { return Dyadic(-num_, exp_); }
  Dyadic operator+(const Dyadic& o) const;
  Dyadic operator-(const Dyadic& o) const { return *this + (-o); }
  Dyadic operator*(const Dyadic& o) const;
  Dyadic ldexp(int k) const { return num_ == 0 ? Dyadic() : Dyadic(num_, exp_ + k); }
  Dyadic& operator+=(const Dyadic& o) { return *this = *this + o; }

  bool operator==(const Dyadic& o) const = default;
  std::strong_ordering operator<=>(const Dyadic& o) const;

  mpq_class to_mpq() const;
  double to_double() const;
  // Exact decimal expansion, e.g. "-0.5", "254.5".
  std::string to_string() const;

 private:
  i128 num_ = 0;
  int exp_ = 0;
};

mpz_class to_mpz(i128 v);
i128 to_i128(const mpz_class& z);  // throws if it does not fit
int bit_length(u128 v);
// Exact rational from "12", "-0.5", "6.62607015e-34" or "1/3".
mpq_class parse_decimal_exact(std::string_view text);

}  // namespace takum
