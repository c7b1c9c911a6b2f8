#include <catch2/catch_amalgamated.hpp>

#include "inls/rational.hpp"

using inls::ExtRational;
using inls::Rational;

TEST_CASE("rational arithmetic is exact and normalized") {
  Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(Rational(-4, -8) == Rational(1, 2));
  CHECK(Rational(4, -8) == Rational(-1, 2));
  CHECK(Rational(0, 7) == Rational(0));
}

TEST_CASE("rational comparisons avoid overflow in cross products") {
  Rational big(INT64_MAX / 3, 2);
  Rational small(1, 3);
  CHECK(small < big);
  CHECK(big > small);
  CHECK(Rational(2, 4) == Rational(1, 2));
  CHECK(Rational(-1, 2) < Rational(1, 3));
}

TEST_CASE("rational throws on zero denominators and overflow") {
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(1) / Rational(0), std::domain_error);
  Rational huge(INT64_MAX, 1);
  CHECK_THROWS_AS(huge * huge, std::overflow_error);
}

TEST_CASE("rational string round trip") {
  for (auto s : {"3/4", "-7/5", "12", "0"}) {
    CHECK(Rational::parse(s).str() == s);
  }
  CHECK(Rational::parse("6/8") == Rational(3, 4));
  CHECK_THROWS_AS(Rational::parse("abc"), std::invalid_argument);
}

TEST_CASE("extended rational models the infinite endpoint") {
  ExtRational inf = ExtRational::infinity();
  CHECK(inf.is_infinite());
  CHECK(inf.reciprocal() == ExtRational(0));
  CHECK(ExtRational(0).reciprocal().is_infinite());
  CHECK(ExtRational(3, 2) < inf);
  CHECK(ExtRational::parse("inf").is_infinite());
  CHECK(ExtRational::parse("5/3") == ExtRational(5, 3));
  CHECK(inf.str() == "inf");
}

TEST_CASE("reciprocal arithmetic round trips", "[property]") {
  auto seed = GENERATE(take(200, random(std::int64_t(1), std::int64_t(1 << 20))));
  auto den = GENERATE(take(1, random(std::int64_t(1), std::int64_t(1 << 10))));
  Rational r(seed, den);
  CHECK(r.reciprocal().reciprocal() == r);
}
