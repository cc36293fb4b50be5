#pragma once

#include <cstdint>
#include <string>

#include <gmpxx.h>

#include "takum/dyadic.hpp"
#include "takum/oracle.hpp"

namespace takum {

struct PositBits {
  unsigned width = 0;
  std::uint64_t payload = 0;

  static PositBits make(unsigned width, std::uint64_t payload);
  bool is_zero() const { return payload == 0; }
  bool is_nar() const { return payload == std::uint64_t{1} << (width - 1); }
  bool operator==(const PositBits&) const = default;
};

struct PositFields {
  unsigned sign = 0;
  int run_length = 0;     // k
  unsigned run_bit = 0;   // R_0
  int regime = 0;         // r
  int exponent_bits = 0;  // e in 0..3
  int fraction_bits = 0;  // p, physically present
  std::uint64_t fraction = 0;
  Dyadic fraction_value;  // f
  int actual_exponent = 0;  // (-1)^S (4r + e + S)
};

struct PositDecoded {
  enum class Kind { Zero, NaR, Finite };
  Kind kind = Kind::Zero;
  mpq_class value;  // exact for Finite
  PositFields fields;
};

PositDecoded posit_decode(const PositBits& b);
// Finite value (0 for zero); NaR throws NotFinite.
mpq_class posit_value(const PositBits& b);
PositBits posit_round(const BigReal& x, unsigned n);
PositBits posit_negate(const PositBits& b);
mpq_class posit_maxpos(unsigned n);
mpq_class posit_minpos(unsigned n);

std::string posit_dump(const PositBits& b);

}  // namespace takum
