#pragma once

#include <cstdint>
#include <functional>

#include "takum/oracle.hpp"

namespace takum::detail {

// Largest pattern P in [lo, hi] with value(P) <= a, given value(lo) <= a.
// value must be increasing over [lo, hi].
inline std::uint64_t floor_pattern(const BigReal& a, std::uint64_t lo, std::uint64_t hi,
                                   const std::function<mpq_class(std::uint64_t)>& value) {
  while (lo < hi) {
    std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (compare(a, value(mid)) >= 0) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

// Round-to-nearest between consecutive patterns p and p+1 around a, with the
// tie threshold supplied by the caller; ties pick the even pattern.
inline std::uint64_t nearest_pattern(const BigReal& a, std::uint64_t p, const mpq_class& value_p,
                                     const mpq_class& threshold) {
  if (exactly_equal(a, BigReal(value_p))) return p;
  int c = compare(a, threshold);
  if (c < 0) return p;
  if (c > 0) return p + 1;
  return (p & 1) ? p + 1 : p;
}

}  // namespace takum::detail
