#pragma once

#include "takum/bits.hpp"
#include "takum/codec.hpp"
#include "takum/oracle.hpp"

namespace takum {

enum class GaussBase { SqrtE, E, Two };
enum class GaussVariant { Plus, Minus };

struct GaussLogQuery {
  BigReal q;  // q > 0 (q >= 0 for Plus)
  GaussBase base = GaussBase::SqrtE;
  GaussVariant variant = GaussVariant::Plus;
};

// log_b(1 +- b^-q) with absolute error below 2^-precision.
Mpfr gauss_log(const GaussLogQuery& query, mpfr_prec_t precision);
// Rigorous enclosure of the same quantity at working precision prec.
Interval gauss_log_enclose(const GaussLogQuery& query, mpfr_prec_t prec);

TakumBits mul(const TakumValue& x, const TakumValue& y, unsigned n);
TakumBits div(const TakumValue& x, const TakumValue& y, unsigned n);
TakumBits inv(const TakumValue& x, unsigned n);
TakumBits sqrt_abs(const TakumValue& x, unsigned n);
TakumBits square(const TakumValue& x, unsigned n);
TakumBits add(const TakumValue& x, const TakumValue& y, unsigned n);
TakumBits sub(const TakumValue& x, const TakumValue& y, unsigned n);

// Exact result of an arithmetic operation on takum values, before rounding.
// Zero | NaR | real; add/sub results are enclosure-only (never dyadic in l)
// unless they cancel or involve zero.
struct ExactResult {
  bool nar = false;
  BigReal value;
};
ExactResult exact_add(const TakumValue& x, const TakumValue& y);

// Convenience overloads on bit patterns; the result width equals the operand width.
TakumBits mul(const TakumBits& x, const TakumBits& y);
TakumBits div(const TakumBits& x, const TakumBits& y);
TakumBits add(const TakumBits& x, const TakumBits& y);
TakumBits sub(const TakumBits& x, const TakumBits& y);

}  // namespace takum
