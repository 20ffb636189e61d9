#include <doctest.h>

#include <mpfr.h>

#include <random>
#include <vector>

#include "numfuzz/numerics/interval.hpp"
#include "numfuzz/numerics/rational.hpp"
#include "numfuzz/numerics/real.hpp"
#include "numfuzz/numerics/relprec.hpp"

using namespace numfuzz;
using namespace numfuzz::numerics;

namespace {

Rational from_mpfr(mpfr_t t) {
  mpz_class m;
  long e = mpfr_get_z_2exp(m.get_mpz_t(), t);
  return ldexp(Rational(m), e);
}

// ln(x) from MPFR at `bits`, rounded in direction rnd.
Rational mpfr_ln(const Rational& x, int bits, mpfr_rnd_t rnd) {
  mpfr_t t;
  mpfr_init2(t, bits);
  mpfr_set_q(t, x.get_mpq_t(), rnd);
  mpfr_log(t, t, rnd);
  Rational r = from_mpfr(t);
  mpfr_clear(t);
  return r;
}

// ln 2 = sum_{k>=1} 1 / (k 2^k): lower and upper bounds from n terms, the tail
// being at most 2^-n.
Interval ln2_series(int n) {
  Rational s(0);
  for (int k = 1; k <= n; ++k) s += Rational(1, k) * ldexp(Rational(1), -k);
  return Interval(s, Rational(s + ldexp(Rational(1), -n)));
}

Rational random_positive(std::mt19937_64& rng) {
  std::uniform_int_distribution<long> num(1, 1L << 30), den(1, 1L << 30);
  return Rational(num(rng), den(rng));
}

}  // namespace

TEST_CASE("interval examples") {
  Interval three = add(Interval::point(Rational(1)), Interval::point(Rational(2)), 64);
  CHECK(three.lo() == 3);
  CHECK(three.hi() == 3);

  Interval l1 = ln(Interval::point(Rational(1)), 128);
  CHECK(l1.contains(Rational(0)));
  CHECK(l1.width() <= ldexp(Rational(1), -127));

  Interval l2 = ln(Interval::point(Rational(2)), 128);
  CHECK(l2.width() <= ldexp(Rational(1), -120));
  Interval ref = ln2_series(400);
  CHECK(l2.lo() <= ref.hi());
  CHECK(ref.lo() <= l2.hi());
  CHECK(l2.contains(mpfr_ln(Rational(2), 400, MPFR_RNDD)));
  CHECK(l2.contains(mpfr_ln(Rational(2), 400, MPFR_RNDU)));

  CHECK_THROWS_AS(Interval(Rational(2), Rational(1)), std::invalid_argument);
  std::vector<Interval> one{Interval::point(Rational(1))};
  CHECK_THROWS_AS(interval_op(IntervalOp::Add, one, 64), std::invalid_argument);
}

TEST_CASE("ln enclosure contains an independent high-precision value") {
  std::mt19937_64 rng(17);
  for (int bits : {64, 128, 256}) {
    for (int i = 0; i < 300; ++i) {
      Rational x = random_positive(rng);
      if (x == 1) continue;
      Interval e = ln(Interval::point(x), bits);
      Rational lo = mpfr_ln(x, 2 * bits + 64, MPFR_RNDD);
      Rational hi = mpfr_ln(x, 2 * bits + 64, MPFR_RNDU);
      REQUIRE(e.lo() <= lo);
      REQUIRE(hi <= e.hi());
      // Tight: width within a few ulps of the working precision.
      Rational mag = abs(lo) > abs(hi) ? Rational(abs(lo)) : Rational(abs(hi));
      REQUIRE(e.width() <= mag * ldexp(Rational(1), 4 - bits));
    }
  }
  // Values very close to 1 keep relative accuracy.
  Rational near_one = Rational(1) + ldexp(Rational(1), -200);
  Interval e = ln(Interval::point(near_one), 128);
  CHECK(e.lo() <= mpfr_ln(near_one, 600, MPFR_RNDD));
  CHECK(mpfr_ln(near_one, 600, MPFR_RNDU) <= e.hi());
  CHECK(e.width() <= ldexp(Rational(1), -200 - 120));
}

TEST_CASE("interval operations are sound for random point inputs") {
  std::mt19937_64 rng(3);
  const int bits = 80;
  for (int i = 0; i < 2000; ++i) {
    Rational a = random_positive(rng), b = random_positive(rng);
    Interval ia = Interval::point(a), ib = Interval::point(b);
    REQUIRE(add(ia, ib, bits).contains(Rational(a + b)));
    REQUIRE(mul(ia, ib, bits).contains(Rational(a * b)));
    REQUIRE(div(ia, ib, bits).contains(Rational(a / b)));
    Interval s = sqrt(ia, bits);
    REQUIRE(s.lo() * s.lo() <= a);
    REQUIRE(a <= s.hi() * s.hi());
    Interval l = ln(ia, bits);
    REQUIRE(l.lo() <= mpfr_ln(a, 3 * bits, MPFR_RNDD));
    REQUIRE(mpfr_ln(a, 3 * bits, MPFR_RNDU) <= l.hi());
  }
}

TEST_CASE("interval operations are monotone in their inputs") {
  std::mt19937_64 rng(4);
  const int bits = 64;
  for (int i = 0; i < 1000; ++i) {
    Rational a = random_positive(rng), b = random_positive(rng);
    Rational lo = a < b ? a : b, hi = a < b ? b : a;
    Interval wide(lo, hi);
    Rational mid = (lo + hi) / 2;
    Interval p = Interval::point(mid);
    Interval c = Interval::point(Rational(3, 7));
    REQUIRE(add(wide, c, bits).lo() <= add(p, c, bits).lo());
    REQUIRE(mul(wide, c, bits).hi() >= mul(p, c, bits).hi());
    REQUIRE(div(c, wide, bits).lo() <= div(c, p, bits).lo());
    REQUIRE(ln(wide, bits).hi() >= ln(p, bits).hi());
  }
}

TEST_CASE("rp distance") {
  Interval zero = rp_distance(Interval::point(Rational(5)), Interval::point(Rational(5)), 64);
  CHECK(zero.lo() == 0);
  CHECK(zero.hi() == 0);

  std::mt19937_64 rng(8);
  for (int i = 0; i < 500; ++i) {
    Rational x = random_positive(rng), y = random_positive(rng);
    Interval d1 = rp_distance(Interval::point(x), Interval::point(y), 96);
    Interval d2 = rp_distance(Interval::point(y), Interval::point(x), 96);
    REQUIRE(sgn(d1.lo()) >= 0);
    REQUIRE(d1.lo() <= d2.hi());
    REQUIRE(d2.lo() <= d1.hi());
    Rational truth = abs(mpfr_ln(Rational(x / y), 300, MPFR_RNDN));
    REQUIRE(d1.lo() <= truth + ldexp(Rational(1), -280));
    REQUIRE(truth <= d1.hi() + ldexp(Rational(1), -280));
  }
}

TEST_CASE("rp to relative error") {
  Grade eps = Grade::pow2(-52);
  CHECK(rp_to_rel(Grade(2L) * eps).text == "4.44e-16");
  CHECK(rp_to_rel(Grade::zero()).text == "0.00e0");
  CHECK(rp_to_rel(Grade(1023L) * eps).text == "2.27e-13");
  CHECK(rp_to_rel(Grade::infinity()).infinite);
  CHECK(rp_to_rel(Grade::infinity()).text == "inf");
  CHECK_THROWS_AS(rp_to_rel(Grade(800L)), AlphaTooLarge);
  CHECK(rp_to_rel(Grade(1L)).text == "1.72e0");
  CHECK(rp_to_rel(Grade(127L) * eps).text == "2.82e-14");
  CHECK(rp_to_rel(Grade(Rational(5, 2)) * eps).text == "5.55e-16");

  // The upper bound is a true upper bound on e^a - 1.
  std::mt19937_64 rng(12);
  std::uniform_int_distribution<long> num(1, 100000);
  for (int i = 0; i < 300; ++i) {
    Rational a(num(rng), 1 << 20);
    Rational upper = rp_to_rel(Grade(a)).upper;
    mpfr_t t;
    mpfr_init2(t, 200);
    mpfr_set_q(t, a.get_mpq_t(), MPFR_RNDD);
    mpfr_expm1(t, t, MPFR_RNDD);
    Rational lower = from_mpfr(t);
    mpfr_clear(t);
    REQUIRE(lower <= upper);
    REQUIRE(upper <= lower * (1 + ldexp(Rational(1), -55)));
  }
}

TEST_CASE("real numbers close over sqrt and compare by refinement") {
  Real two(Rational(2));
  Real r2 = sqrt(two);
  CHECK_FALSE(r2.is_exact());
  CHECK(sqrt(Real(Rational(9, 4))).is_exact());
  CHECK(sqrt(Real(Rational(9, 4))).exact() == Rational(3, 2));
  CHECK(Real::less(r2, Real(Rational(3, 2))));
  CHECK_FALSE(Real::less(Real(Rational(3, 2)), r2));
  CHECK(Real::less(Real(Rational(141421, 100000)), r2));
  CHECK_THROWS_AS(Real::less(r2, r2, 512), PrecisionExhausted);

  // sqrt(2)^2 is exactly 2 but the enclosure never collapses to a point.
  CHECK_THROWS_AS((r2 * r2).round_up(FpFormat::binary64(), 512), PrecisionExhausted);
  RoundResult up = r2.round_up(FpFormat::binary64());
  REQUIRE_FALSE(up.is_exceptional());
  CHECK(up.value() * up.value() > 2);
}
