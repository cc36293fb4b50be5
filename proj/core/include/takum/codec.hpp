#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "takum/bits.hpp"
#include "takum/dyadic.hpp"
#include "takum/oracle.hpp"

namespace takum {

// Zero | NaR | Finite (-1)^S * sqrt(e)^l
class TakumValue {
 public:
  enum class Kind { Zero, NaR, Finite };

  static TakumValue zero() { return TakumValue(Kind::Zero, 0, Dyadic()); }
  static TakumValue nar() { return TakumValue(Kind::NaR, 0, Dyadic()); }
  // Requires |l| < 255.
  static TakumValue finite(int sign_bit, const Dyadic& l);

  Kind kind() const { return kind_; }
  bool is_zero() const { return kind_ == Kind::Zero; }
  bool is_nar() const { return kind_ == Kind::NaR; }
  bool is_finite() const { return kind_ == Kind::Finite; }
  int sign_bit() const { return sign_; }
  const Dyadic& ell() const { return ell_; }

  // Zero -> 0, Finite -> exact ExpHalf real; NaR throws NotFinite.
  BigReal to_real() const;
  TakumValue negated() const;

  bool operator==(const TakumValue&) const = default;

 private:
  TakumValue(Kind k, int s, Dyadic l) : kind_(k), sign_(s), ell_(l) {}
  Kind kind_;
  int sign_;
  Dyadic ell_;
};

struct DecodedFields {
  unsigned sign = 0;       // S
  unsigned direction = 0;  // D
  unsigned regime_bits = 0;  // R as an unsigned 3-bit value
  int regime = 0;            // r
  std::uint64_t characteristic_bits = 0;  // C (r bits, ghost bits included as zeros)
  int characteristic = 0;                 // c
  int mantissa_bits = 0;                  // p, physically present
  std::uint64_t mantissa = 0;             // M (p bits)
  Dyadic mantissa_value;                  // m = M / 2^p
  Dyadic ell;                             // (-1)^S (c + m)
};

struct Decoded {
  TakumValue value;
  DecodedFields fields;
};

Decoded decode(const TakumBits& bits);
// Same value as decode(bits).value, skipping the field record.
TakumValue decode_value(const TakumBits& bits);

// Characteristic-level layout shared by the logarithmic and linear variants.
struct CharacteristicFields {
  unsigned direction;
  unsigned regime_bits;
  int regime;
  std::uint64_t characteristic_bits;
};
CharacteristicFields characteristic_fields(int c);  // c in [-255, 254]

// (-1)^s (1 + f) 2^h, f in [0, 1)
struct FloatTriple {
  int sign = 0;
  BigReal fraction;
  long exponent = 0;

  BigReal to_real() const;
};

// Source of v = c + m, the unsigned quantity encoded by D, R, C, M, together
// with the sign bit. Values are exact or refined through the oracle on demand.
class PatternSource {
 public:
  virtual ~PatternSource() = default;
  virtual int sign_bit() const = 0;
  // floor(v * 2^j) for j >= 0
  virtual i128 floor_scaled(int j) const = 0;
  // true when v * 2^j is an integer (never for transcendental sources)
  virtual bool exact_at(int j) const = 0;
};

// Output of the lossless encoder: S, D, R, C plus a mantissa that is either a
// finite bit string or an on-demand stream.
class TakumEncoding {
 public:
  TakumEncoding(std::shared_ptr<const PatternSource> src);

  unsigned sign() const { return sign_; }
  unsigned direction() const { return fields_.direction; }
  unsigned regime_bits() const { return fields_.regime_bits; }
  int regime() const { return fields_.regime; }
  std::uint64_t characteristic_bits() const { return fields_.characteristic_bits; }
  int characteristic() const { return c_; }
  // p, or nullopt when the mantissa never terminates within the probe limit.
  std::optional<int> mantissa_bits(int probe_limit = 128) const;
  // First k mantissa bits (zero-extended if the mantissa is shorter), k <= 120.
  u128 mantissa_prefix(int k) const;
  // The leading 5 + r + k bits (S, D, R, C and k mantissa bits) truncated/extended to i bits, i <= 120.
  u128 truncate_raw(unsigned i) const;

 private:
  std::shared_ptr<const PatternSource> src_;
  unsigned sign_;
  int c_;
  CharacteristicFields fields_;
};

TakumEncoding encode_exact(int sign_bit, const Dyadic& l);  // |l| < 255
TakumEncoding encode_exact(const FloatTriple& x);            // nonzero, inside the open range
TakumEncoding encode_exact(const BigReal& x);                // nonzero, inside the open range
// Minimal-width bit pattern of a dyadic value (width 5 + r + p, at least 2).
TakumBits encode_minimal(const TakumValue& v);

FloatTriple decode_to_float(const TakumValue& v);

TakumBits round(const BigReal& x, unsigned n);
TakumBits round(const TakumValue& v, unsigned n);
TakumBits round_nar(unsigned n);

// zero-extend or strip LSBs
TakumBits truncate(const TakumBits& b, unsigned i);
TakumBits truncate(const TakumEncoding& e, unsigned i);

TakumBits negate_bits(const TakumBits& b);
TakumBits invert_bits(const TakumBits& b);
// Only the sign bit flipped: -1/x.
TakumBits flip_sign_bit(const TakumBits& b);
std::strong_ordering compare(const TakumBits& a, const TakumBits& b);
TakumBits resize(const TakumBits& b, unsigned n2);

// Human-readable field dump.
std::string dump(const TakumBits& bits);

// Shared by the linear variant: Alg. 1 given a pattern source and saturation outcome.
enum class Saturation { None, AboveMax, BelowMin };
TakumBits round_pattern(const PatternSource& src, Saturation sat, unsigned n);

}  // namespace takum
