#include <cstdint>
#include <limits>
#include <random>

#include <gtest/gtest.h>

#include "arrowlab/core/error.hpp"
#include "arrowlab/core/fixed_point.hpp"

using arrowlab::DomainError;
using arrowlab::OverflowError;
using arrowlab::core::FixedPoint;

namespace {

std::int64_t random_raw(std::mt19937_64& g, int bits) {
  std::uniform_int_distribution<std::int64_t> d(-(std::int64_t{1} << bits), std::int64_t{1} << bits);
  return d(g);
}

}  // namespace

TEST(FixedPoint, IntegerAndRatioConstruction) {
  EXPECT_EQ(FixedPoint::from_int(3).raw(), 3 * FixedPoint::kScale);
  EXPECT_EQ(FixedPoint::from_ratio_pow2(1, 6).raw(), FixedPoint::kScale / 64);
  EXPECT_EQ(FixedPoint::from_ratio_pow2(-3, 1).to_double(), -1.5);
  EXPECT_THROW(FixedPoint::from_ratio_pow2(1, 21), DomainError);
  EXPECT_THROW(FixedPoint::from_int(std::int64_t{1} << 50), OverflowError);
}

TEST(FixedPoint, FromDoubleRoundsToNearest) {
  EXPECT_EQ(FixedPoint::from_double(0.5).raw(), FixedPoint::kScale / 2);
  const double ulp = 1.0 / static_cast<double>(FixedPoint::kScale);
  EXPECT_EQ(FixedPoint::from_double(0.4 * ulp).raw(), 0);
  EXPECT_EQ(FixedPoint::from_double(0.6 * ulp).raw(), 1);
  EXPECT_EQ(FixedPoint::from_double(-0.6 * ulp).raw(), -1);
}

TEST(FixedPoint, AddSubtractNegateAreExact) {
  std::mt19937_64 g(7);
  for (int i = 0; i < 10000; ++i) {
    const auto x = FixedPoint::from_raw(random_raw(g, 60));
    const auto y = FixedPoint::from_raw(random_raw(g, 60));
    EXPECT_EQ((x + y) - y, x);
    EXPECT_EQ(-(-x), x);
    EXPECT_EQ((x - y).raw(), x.raw() - y.raw());
  }
}

TEST(FixedPoint, MultiplicationTruncatesTowardZero) {
  const auto tiny = FixedPoint::from_raw(1);
  const auto half = FixedPoint::from_ratio_pow2(1, 1);
  EXPECT_EQ((tiny * half).raw(), 0);
  EXPECT_EQ((-tiny * half).raw(), 0);
  EXPECT_EQ((FixedPoint::from_raw(3) * half).raw(), 1);
  EXPECT_EQ((FixedPoint::from_raw(-3) * half).raw(), -1);
  EXPECT_EQ(FixedPoint::from_int(6) * FixedPoint::from_ratio_pow2(3, 2), FixedPoint::parse("4.5"));

  std::mt19937_64 g(11);
  for (int i = 0; i < 10000; ++i) {
    const auto a = FixedPoint::from_raw(random_raw(g, 40));
    const auto b = FixedPoint::from_raw(random_raw(g, 40));
    EXPECT_EQ(a * b, b * a);
    EXPECT_EQ((-a) * b, -(a * b));
    // Oracle: exact product in long double is within one raw unit of the result.
    const long double exact = static_cast<long double>(a.raw()) * static_cast<long double>(b.raw()) /
                              static_cast<long double>(FixedPoint::kScale);
    const long double got = static_cast<long double>((a * b).raw());
    EXPECT_LE(std::abs(exact - got), 1.0L);
    EXPECT_LE(std::abs(got), std::abs(exact) + 1e-6L);
  }
}

TEST(FixedPoint, IntegerMultiplicationIsExact) {
  const auto x = FixedPoint::from_raw(12345);
  EXPECT_EQ((x * std::int64_t{-7}).raw(), -86415);
}

TEST(FixedPoint, OverflowIsChecked) {
  const auto big = FixedPoint::from_raw(std::numeric_limits<std::int64_t>::max());
  EXPECT_THROW(big + FixedPoint::from_raw(1), OverflowError);
  EXPECT_THROW(-big - FixedPoint::from_raw(2), OverflowError);
  EXPECT_THROW(-FixedPoint::from_raw(std::numeric_limits<std::int64_t>::min()), OverflowError);
  EXPECT_THROW(big * FixedPoint::from_int(2), OverflowError);
  EXPECT_THROW(big * std::int64_t{2}, OverflowError);
}

TEST(FixedPoint, DecimalRendering) {
  EXPECT_EQ(FixedPoint::from_int(-3).to_string(), "-3");
  EXPECT_EQ(FixedPoint::from_ratio_pow2(1, 1).to_string(), "0.5");
  EXPECT_EQ(FixedPoint::from_ratio_pow2(-3073, 10).to_string(), "-3.0009765625");
  EXPECT_EQ(FixedPoint::from_raw(1).to_string(), "0.00000095367431640625");
  EXPECT_EQ(FixedPoint::from_raw(-1).to_string(), "-0.00000095367431640625");
  EXPECT_EQ(FixedPoint{}.to_string(), "0");
}

TEST(FixedPoint, ParseRoundTripsEveryValue) {
  std::mt19937_64 g(3);
  for (int i = 0; i < 10000; ++i) {
    const auto x = FixedPoint::from_raw(random_raw(g, 62));
    EXPECT_EQ(FixedPoint::parse(x.to_string()), x);
  }
  EXPECT_EQ(FixedPoint::parse("35.5"), FixedPoint::from_ratio_pow2(71, 1));
  EXPECT_EQ(FixedPoint::parse("-0.25"), FixedPoint::from_ratio_pow2(-1, 2));
}

TEST(FixedPoint, ParseRejectsInexactOrMalformed) {
  EXPECT_THROW(FixedPoint::parse("0.1"), DomainError);
  EXPECT_THROW(FixedPoint::parse(""), DomainError);
  EXPECT_THROW(FixedPoint::parse("1.2.3"), DomainError);
  EXPECT_THROW(FixedPoint::parse("abc"), DomainError);
  EXPECT_THROW(FixedPoint::parse("99999999999999999999"), OverflowError);
}

TEST(FixedPoint, Ordering) {
  EXPECT_LT(FixedPoint::from_int(-1), FixedPoint::from_raw(1));
  EXPECT_GT(FixedPoint::parse("2.5"), FixedPoint::from_int(2));
}
