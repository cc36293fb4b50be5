#include <gtest/gtest.h>

#include <set>

#include "helpers.hpp"
#include "takum/codec.hpp"
#include "takum/error.hpp"
#include "takum/linear.hpp"

using namespace takum;

namespace {

// Order key: NaR below everything, then the exact rational value.
struct LinKey {
  bool nar;
  mpq_class v;
  bool operator<(const LinKey& o) const {
    if (nar != o.nar) return nar;
    return !nar && v < o.v;
  }
};

LinKey lin_key(const TakumBits& b) {
  LinearTakumValue v = lin_decode(b);
  if (v.is_nar()) return {true, 0};
  return {false, v.to_rational()};
}

std::uint64_t signed_to_pattern(std::int64_t i, unsigned n) { return static_cast<std::uint64_t>(i) & width_mask(n); }

// Nearest linear takum in value by bisection over the signed pattern order.
// Ties go up in pattern order; saturation never reaches zero or NaR.
std::uint64_t reference_lin_round(const mpq_class& x, unsigned n) {
  auto val = [n](std::int64_t i) { return lin_decode(TakumBits::make(n, signed_to_pattern(i, n))).to_rational(); };
  const std::int64_t top = static_cast<std::int64_t>(width_mask(n - 1));
  if (x == 0) return 0;
  if (x >= val(top)) return signed_to_pattern(top, n);
  if (x <= val(-top)) return signed_to_pattern(-top, n);
  std::int64_t lo = -top, hi = top;  // val(lo) <= x < val(hi)
  while (hi - lo > 1) {
    std::int64_t mid = lo + (hi - lo) / 2;
    (val(mid) <= x ? lo : hi) = mid;
  }
  std::int64_t pick;
  if (val(lo) == x) {
    pick = lo;
  } else {
    mpq_class m = (val(lo) + val(hi)) / 2;
    pick = x < m ? lo : hi;
  }
  if (pick == 0) pick = x > 0 ? 1 : -1;
  return signed_to_pattern(pick, n);
}

}  // namespace

TEST(LinearDecode, Examples) {
  EXPECT_TRUE(lin_decode(TakumBits::zero(12)).is_zero());
  EXPECT_TRUE(lin_decode(TakumBits::nar(12)).is_nar());
  EXPECT_EQ(lin_decode(TakumBits::make(12, 0x400)).to_rational(), 1);
  // S=1, D=1, R=000: e = -(0 + 1), value (1 - 3) * 2^-1
  LinearTakumValue m = lin_decode(TakumBits::make(12, 0xC00));
  EXPECT_EQ(m.exponent(), -1);
  EXPECT_EQ(m.to_rational(), -1);
  // 1.5 = (1 + 0.5) * 2^0
  EXPECT_EQ(lin_decode(TakumBits::make(12, 0x440)).to_rational(), mpq_class(3, 2));
}

TEST(LinearDecode, RangeEndpoints) {
  mpq_class maxv = lin_decode(TakumBits::make(16, 0x7FFF)).to_rational();
  mpq_class minv = lin_decode(TakumBits::make(16, 0x0001)).to_rational();
  mpq_class two255(mpz_class(1) << 255);
  EXPECT_LT(maxv, two255);
  EXPECT_GT(minv, 1 / two255);
  EXPECT_GT(maxv, two255 / 2);
}

TEST(LinearEncode, Examples) {
  LinearFields one = lin_encode({0, Dyadic(), 0});
  EXPECT_EQ(one.sign, 0u);
  EXPECT_EQ(one.direction, 1u);
  EXPECT_EQ(one.regime_bits, 0u);
  EXPECT_EQ(one.fraction_bits, 0);
  EXPECT_EQ(lin_pattern(one), TakumBits::make(5, 0b01000));

  LinearFields neg8 = lin_encode({1, Dyadic(), 3});
  EXPECT_EQ(neg8.characteristic, -3);
  EXPECT_EQ(neg8.direction, 0u);
  EXPECT_EQ(lin_decode(lin_pattern(neg8)).to_rational(), -8);

  LinearFields borrow = lin_encode({1, Dyadic::parse("0.5"), 0});
  EXPECT_EQ(borrow.characteristic, -1);
  EXPECT_EQ(borrow.fraction_bits, 1);
  EXPECT_EQ(borrow.fraction, 1u);
  EXPECT_EQ(lin_decode(lin_pattern(borrow)).to_rational(), mpq_class(-3, 2));

  EXPECT_THROW(lin_encode({0, Dyadic(), -255}), Error);
  EXPECT_THROW(lin_encode({0, Dyadic(), 255}), Error);
  EXPECT_THROW(lin_encode({0, Dyadic(1), 0}), Error);
}

TEST(LinearDecodeToFloat, Branches) {
  DyadicTriple a = lin_decode_to_float(LinearTakumValue::finite(0, Dyadic::parse("0.25"), 5));
  EXPECT_EQ(a.sign, 0);
  EXPECT_EQ(a.fraction, Dyadic::parse("0.25"));
  EXPECT_EQ(a.exponent, 5);
  DyadicTriple b = lin_decode_to_float(LinearTakumValue::finite(1, Dyadic(), 5));
  EXPECT_EQ(b.exponent, 6);
  EXPECT_TRUE(b.fraction.is_zero());
  EXPECT_THROW(lin_decode_to_float(LinearTakumValue::nar()), Error);
}

TEST(LinearCodec, RoundTripExhaustive16) {
  for (std::uint64_t p = 1; p < 65536; ++p) {
    TakumBits b = TakumBits::make(16, p);
    LinearTakumValue v = lin_decode(b);
    if (!v.is_finite()) continue;
    DyadicTriple t = lin_decode_to_float(v);
    mpq_class tv = (1 + t.fraction.to_mpq()) * (t.exponent >= 0 ? mpq_class(mpz_class(1) << t.exponent)
                                                                 : mpq_class(1, mpz_class(1) << -t.exponent));
    if (t.sign) tv = -tv;
    ASSERT_EQ(tv, v.to_rational()) << p;
    TakumBits m = lin_pattern(lin_encode(t));
    ASSERT_EQ(lin_decode(m), v) << p;
    ASSERT_EQ(resize(m, 16), b) << p;
  }
}

TEST(LinearRound, Examples) {
  EXPECT_EQ(lin_round(BigReal(mpq_class(1)), 12).payload, 0x400u);
  EXPECT_EQ(lin_round(BigReal(mpq_class(mpz_class(1) << 300)), 16).payload, 0x7FFFu);
  EXPECT_EQ(lin_round(BigReal(mpq_class(-(mpz_class(1) << 300))), 16).payload, 0x8001u);
  EXPECT_EQ(lin_round(BigReal(mpq_class(1, mpz_class(1) << 300)), 16).payload, 0x0001u);
  EXPECT_EQ(lin_decode(lin_round(BigReal(mpq_class(3)), 16)).to_rational(), 3);
  EXPECT_TRUE(lin_round(BigReal(), 16).is_zero());
}

TEST(LinearRound, MatchesNearestInValue) {
  auto& g = takum::testing::rng();
  for (unsigned n : {12u, 16u, 32u}) {
    for (int i = 0; i < 300; ++i) {
      mpq_class x;
      if (i % 3 == 0) {
        x = mpq_class(static_cast<long>(g() % 200001) - 100000, static_cast<long>(g() % 9999 + 1));
        x.canonicalize();
      } else {
        x = *takum::testing::random_real(-250, 250).rational();
      }
      ASSERT_EQ(lin_round(BigReal(x), n).payload, reference_lin_round(x, n)) << "n=" << n << " x=" << x.get_str();
    }
  }
}

TEST(LinearRound, TiesAndIdempotence) {
  const unsigned n = 12;
  for (std::uint64_t p = 1; p < 4095; ++p) {
    TakumBits b = TakumBits::make(n, p);
    if (b.is_nar() || TakumBits::make(n, p + 1).is_nar()) continue;
    mpq_class a = lin_decode(b).to_rational();
    ASSERT_EQ(lin_round(BigReal(a), n), b) << p;
    mpq_class c = lin_decode(TakumBits::make(n, p + 1)).to_rational();
    if (p + 1 == 4096 || c == 0) continue;
    ASSERT_EQ(lin_round(BigReal(mpq_class((a + c) / 2)), n).payload, p + 1) << p;
  }
}

class LinearStructural : public ::testing::TestWithParam<unsigned> {};

TEST_P(LinearStructural, UniqueMonotoneNegation) {
  const unsigned n = GetParam();
  const std::uint64_t count = std::uint64_t{1} << n;
  std::optional<LinKey> prev;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::uint64_t p = (i + (count >> 1)) & (count - 1);
    TakumBits b = TakumBits::make(n, p);
    LinKey k = lin_key(b);
    if (prev) {
      ASSERT_TRUE(*prev < k) << "n=" << n << " p=" << p;
    }
    prev = k;
    LinKey neg = lin_key(negate_bits(b));
    ASSERT_EQ(neg.nar, k.nar);
    if (!k.nar) {
      ASSERT_EQ(neg.v, -k.v) << "n=" << n << " p=" << p;
    }
  }
}

INSTANTIATE_TEST_SUITE_P(Widths, LinearStructural, ::testing::Range(2u, 13u));

// The bitwise inversion rule of logarithmic takums only reproduces 1/x for
// linear takums when |x| is a power of two.
TEST(LinearInversion, BitRuleFailsOffPowersOfTwo) {
  TakumBits three_halves = TakumBits::make(12, 0x440);
  mpq_class got = lin_decode(invert_bits(three_halves)).to_rational();
  EXPECT_NE(got, mpq_class(2, 3));
  EXPECT_EQ(got, mpq_class(3, 4));

  for (std::uint64_t p = 1; p < 4096; ++p) {
    TakumBits b = TakumBits::make(12, p);
    LinearTakumValue v = lin_decode(b);
    if (!v.is_finite()) continue;
    mpq_class x = v.to_rational();
    bool holds = lin_decode(invert_bits(b)).to_rational() == 1 / x;
    mpq_class ax = abs(x);
    bool pow2 = ax.get_num() == 1 || (ax.get_den() == 1 && mpz_popcount(ax.get_num().get_mpz_t()) == 1);
    ASSERT_EQ(holds, pow2) << p;
  }
}
