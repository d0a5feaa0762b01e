#include <gtest/gtest.h>

#include <random>

#include "besov/rational.hpp"

using besov::Exponent;
using besov::Rational;

TEST(Rational, NormalizesSignAndGcd) {
  const Rational r(6, -8);
  EXPECT_EQ(r.num(), -3);
  EXPECT_EQ(r.den(), 4);
  EXPECT_EQ(Rational(0, 5), Rational(0));
}

TEST(Rational, ParsesFractionsAndDecimals) {
  EXPECT_EQ(Rational::parse("4/3"), Rational(4, 3));
  EXPECT_EQ(Rational::parse("1.25"), Rational(5, 4));
  EXPECT_EQ(Rational::parse("-0.5"), Rational(-1, 2));
  EXPECT_EQ(Rational::parse(" 7 "), Rational(7));
  EXPECT_EQ(Rational::parse("1.2"), Rational(6, 5));
  EXPECT_THROW(Rational::parse("abc"), besov::PreconditionError);
  EXPECT_THROW(Rational::parse(""), besov::PreconditionError);
}

TEST(Rational, ApproximateRecoversSimpleFractions) {
  EXPECT_EQ(Rational::approximate(1.2), Rational(6, 5));
  EXPECT_EQ(Rational::approximate(4.0 / 3.0), Rational(4, 3));
  EXPECT_EQ(Rational::approximate(0.01), Rational(1, 100));
  EXPECT_EQ(Rational::approximate(-2.5), Rational(-5, 2));
}

TEST(Rational, ArithmeticMatchesDoubles) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> num(-50, 50), den(1, 40);
  for (int i = 0; i < 500; ++i) {
    const Rational a(num(rng), den(rng)), b(num(rng), den(rng));
    EXPECT_NEAR((a + b).to_double(), a.to_double() + b.to_double(), 1e-12);
    EXPECT_NEAR((a - b).to_double(), a.to_double() - b.to_double(), 1e-12);
    EXPECT_NEAR((a * b).to_double(), a.to_double() * b.to_double(), 1e-12);
    if (b != Rational(0)) { EXPECT_NEAR((a / b).to_double(), a.to_double() / b.to_double(), 1e-9); }
    EXPECT_EQ(a < b, a.to_double() < b.to_double());
  }
}

TEST(Rational, OverflowThrows) {
  const Rational big(std::numeric_limits<std::int64_t>::max() / 2);
  EXPECT_THROW(big * big, std::overflow_error);
}

TEST(Exponent, InfinityOrdering) {
  const Exponent inf = Exponent::infinity();
  EXPECT_TRUE(Exponent(4) < inf);
  EXPECT_FALSE(inf < inf);
  EXPECT_TRUE(inf >= Exponent(1000));
  EXPECT_EQ(inf.reciprocal(), Rational(0));
  EXPECT_EQ(Exponent::parse("inf"), inf);
  EXPECT_EQ(Exponent::parse("4/3").finite(), Rational(4, 3));
}
