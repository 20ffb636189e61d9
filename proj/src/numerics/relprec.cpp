#include "numfuzz/numerics/relprec.hpp"

#include "numfuzz/numerics/rational.hpp"

namespace numfuzz::numerics {

namespace {
constexpr int kDisplayBits = 64;
constexpr long kAlphaCeiling = 710;  // e^710 > DBL_MAX
}  // namespace

Interval rp_distance(const Interval& x, const Interval& y, int bits) {
  Interval log_ratio;
  if (x.lo() == x.hi() && y.lo() == y.hi()) {
    // Point inputs: take ln of the exact ratio so equal values give exactly 0.
    log_ratio = outward(ln_enclosure(Rational(x.lo() / y.lo()), bits), bits);
  } else {
    log_ratio = ln(div(x, y, bits + 8), bits);
  }
  const Rational& lo = log_ratio.lo();
  const Rational& hi = log_ratio.hi();
  if (sgn(lo) >= 0) return log_ratio;
  if (sgn(hi) <= 0) return Interval(Rational(-hi), Rational(-lo));
  Rational top = -lo > hi ? Rational(-lo) : hi;
  return Interval(Rational(0), top);
}

RelErrorBound rp_to_rel(const Grade& alpha) {
  if (alpha.is_infinite()) return {"inf", Rational(0), true};
  const Rational& a = alpha.value();
  if (a >= 1) {
    if (a >= kAlphaCeiling)
      throw AlphaTooLarge("RP bound " + a.get_str() + " is too large to convert to a relative error");
  }
  Rational upper = expm1_upper(a, kDisplayBits);
  if (a >= 1 && upper > Rational(mpz_class(1) << 1023) * 2)
    throw AlphaTooLarge("relative error bound exceeds the binary64 range");
  return {to_scientific(upper, 3), upper, false};
}

std::string grade_decimal(const Grade& g) {
  if (g.is_infinite()) return "inf";
  return to_scientific(g.value(), 3);
}

}  // namespace numfuzz::numerics
