#include <doctest.h>

#include <random>

#include "numfuzz/grade.hpp"
#include "numfuzz/numerics/format.hpp"
#include "numfuzz/numerics/rational.hpp"

using numfuzz::Grade;
using numfuzz::GradeOp;
using numfuzz::Rational;
using numfuzz::grade_arith;

namespace {

Grade random_finite(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(0, 1000), den(1, 64);
  return Grade(Rational(num(rng), den(rng)));
}

}  // namespace

TEST_CASE("grade arithmetic examples") {
  CHECK(grade_arith(GradeOp::Mul, Grade::zero(), Grade::infinity()) == Grade::zero());
  CHECK(grade_arith(GradeOp::Mul, Grade::infinity(), Grade::zero()) == Grade::zero());
  CHECK(grade_arith(GradeOp::Add, Grade::one(), Grade::infinity()).is_infinite());
  CHECK(grade_arith(GradeOp::Mul, Grade(2L), Grade::pow2(-52)) == Grade::pow2(-51));
  CHECK(grade_arith(GradeOp::Max, Grade(3L), Grade::infinity()).is_infinite());
  CHECK(grade_arith(GradeOp::Min, Grade(3L), Grade::infinity()) == Grade(3L));
  CHECK(Grade(Rational(6, 4)).value() == Rational(3, 2));
  CHECK_THROWS_AS(Grade(Rational(-1)), std::invalid_argument);
}

TEST_CASE("grade arithmetic laws on random finite grades") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 10000; ++i) {
    Grade a = random_finite(rng), b = random_finite(rng), c = random_finite(rng);
    REQUIRE(a + b == b + a);
    REQUIRE(a * b == b * a);
    REQUIRE((a + b) + c == a + (b + c));
    REQUIRE((a * b) * c == a * (b * c));
    REQUIRE(a * (b + c) == a * b + a * c);
    REQUIRE((a + Grade::infinity()).is_infinite());
    REQUIRE(Grade::zero() * a == Grade::zero());
  }
  CHECK(Grade::zero() * Grade::infinity() == Grade::zero());
}

TEST_CASE("grade ordering puts infinity on top") {
  CHECK(Grade(1000000L) < Grade::infinity());
  CHECK(Grade::infinity() <= Grade::infinity());
  CHECK(Grade::pow2(-52) < Grade::pow2(-51));
  CHECK(Grade::infinity().to_rational_string() == "inf");
  CHECK(Grade(Rational(1, 4)).to_rational_string() == "1/4");
}

TEST_CASE("unit roundoff") {
  using numfuzz::numerics::FpFormat;
  using numfuzz::numerics::unit_roundoff;
  CHECK(unit_roundoff(FpFormat::binary64()) == Grade::pow2(-52));
  CHECK(unit_roundoff(FpFormat::binary32()) == Grade::pow2(-23));
  CHECK(unit_roundoff(FpFormat{2, 4}) == Grade(Rational(1, 2)));
}

TEST_CASE("format selection strings") {
  using numfuzz::numerics::FpFormat;
  CHECK(FpFormat::parse("binary64") == FpFormat::binary64());
  CHECK(FpFormat::parse("binary32") == FpFormat{24, 127});
  CHECK(FpFormat::parse("p=11,emax=15") == FpFormat{11, 15});
  CHECK(FpFormat::parse("p=11,emax=15").name() == "p=11,emax=15");
  CHECK_THROWS_AS(FpFormat::parse("binary16"), std::invalid_argument);
  CHECK_THROWS_AS(FpFormat::parse("p=1,emax=3"), std::invalid_argument);
}

TEST_CASE("decimal parsing and display") {
  using namespace numfuzz::numerics;
  CHECK(*parse_decimal("0.1") == Rational(1, 10));
  CHECK(*parse_decimal("2.0") == Rational(2));
  CHECK(*parse_decimal("1e-5") == Rational(1, 100000));
  CHECK(*parse_decimal("2.5E2") == Rational(250));
  CHECK_FALSE(parse_decimal("1.2.3"));
  CHECK_FALSE(parse_decimal("."));
  CHECK_FALSE(parse_decimal("1e"));

  CHECK(to_scientific(Rational(0)) == "0.00e0");
  CHECK(to_scientific(Grade::pow2(-51).value()) == "4.44e-16");
  CHECK(to_scientific(Rational(1)) == "1.00e0");
  CHECK(to_scientific(Rational(9995, 10)) == "1.00e3");
  // ties go to even
  CHECK(to_scientific(Rational(1125, 1000)) == "1.12e0");
  CHECK(to_scientific(Rational(1135, 1000)) == "1.14e0");

  CHECK(*to_exact_decimal(Rational(1, 2)) == "0.5");
  CHECK(*to_exact_decimal(Rational(25, 10)) == "2.5");
  CHECK(*to_exact_decimal(Rational(3)) == "3");
  CHECK(*to_exact_decimal(Rational(1, 1000)) == "0.001");
  CHECK_FALSE(to_exact_decimal(Rational(1, 3)));
}

TEST_CASE("dyadic fast paths agree with plain rational arithmetic") {
  using namespace numfuzz::numerics;
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<long> num(-100000, 100000);
  std::uniform_int_distribution<int> shift(-60, 60);
  for (int i = 0; i < 5000; ++i) {
    Rational a = ldexp(Rational(num(rng)), shift(rng));
    Rational b = ldexp(Rational(num(rng)), shift(rng));
    Rational c(num(rng), 3);
    REQUIRE(exact_add(a, b) == Rational(a + b));
    REQUIRE(exact_mul(a, b) == Rational(a * b));
    REQUIRE(exact_add(a, c) == Rational(a + c));
    if (sgn(a) > 0) {
      long e = floor_log2(a);
      REQUIRE(ldexp(Rational(1), e) <= a);
      REQUIRE(a < ldexp(Rational(1), e + 1));
    }
  }
}
