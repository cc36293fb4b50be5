#pragma once

#include <cstdint>
#include <string>

#include "takum/bits.hpp"
#include "takum/codec.hpp"
#include "takum/dyadic.hpp"
#include "takum/oracle.hpp"

namespace takum {

// Zero | NaR | Finite [(1 - 3S) + f] * 2^e
class LinearTakumValue {
 public:
  enum class Kind { Zero, NaR, Finite };

  static LinearTakumValue zero() { return LinearTakumValue(Kind::Zero, 0, Dyadic(), 0); }
  static LinearTakumValue nar() { return LinearTakumValue(Kind::NaR, 0, Dyadic(), 0); }
  // f in [0, 1), e in [-255, 254]
  static LinearTakumValue finite(int sign_bit, const Dyadic& f, int e);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_nar() const { return kind_ == Kind::NaR; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  int sign_bit() const { return sign_; }
  const Dyadic& fraction() const { return f_; }
  int exponent() const { return e_; }

  mpq_class to_rational() const;  // NaR throws NotFinite
  bool operator==(const LinearTakumValue&) const = default;

 private:
  LinearTakumValue(Kind k, int s, Dyadic f, int e) : kind_(k), sign_(s), f_(f), e_(e) {}
  Kind kind_;
  int sign_;
  Dyadic f_;
  int e_;
};

struct LinearFields {
  unsigned sign = 0;
  unsigned direction = 0;
  unsigned regime_bits = 0;
  int regime = 0;
  std::uint64_t characteristic_bits = 0;
  int characteristic = 0;
  int fraction_bits = 0;      // p = inf{i : 2^i f integer}
  std::uint64_t fraction = 0;  // F
};

// Floating-point triple with an exact dyadic fraction.
struct DyadicTriple {
  int sign = 0;
  Dyadic fraction;  // g in [0, 1)
  int exponent = 0;  // h
};

LinearTakumValue lin_decode(const TakumBits& bits);
LinearFields lin_encode(const DyadicTriple& t);
// Minimal-width pattern (at least 2 bits) for the encoded fields.
TakumBits lin_pattern(const LinearFields& f);
DyadicTriple lin_decode_to_float(const LinearTakumValue& v);
TakumBits lin_round(const BigReal& x, unsigned n);

std::string lin_dump(const TakumBits& bits);

}  // namespace takum
