#pragma once

#include <span>
#include <string>

#include "numfuzz/grade.hpp"

namespace numfuzz::numerics {

/// Closed interval [lo, hi] with rational (in practice dyadic) endpoints.
///
/// Results of the operations below are outward rounded to a working
/// precision of P significant bits: lo toward -inf, hi toward +inf.
class Interval {
 public:
  Interval() = default;
  /// Throws std::invalid_argument when lo > hi.
  Interval(Rational lo, Rational hi);
  static Interval point(const Rational& x) { return Interval(x, x); }

  const Rational& lo() const { return lo_; }
  const Rational& hi() const { return hi_; }
  Rational width() const { return Rational(hi_ - lo_); }
  bool contains(const Rational& x) const { return lo_ <= x && x <= hi_; }
  bool is_positive() const { return sgn(lo_) > 0; }

  std::string to_string() const;

 private:
  Rational lo_{0};
  Rational hi_{0};
};

/// Rounds both endpoints outward to `bits` significant bits.
Interval outward(const Interval& x, int bits);

Interval add(const Interval& a, const Interval& b, int bits);
/// Requires positive operands.
Interval mul(const Interval& a, const Interval& b, int bits);
/// Requires positive operands.
Interval div(const Interval& a, const Interval& b, int bits);
/// Requires a non-negative operand.
Interval sqrt(const Interval& a, int bits);
/// Natural logarithm of a positive interval.
Interval ln(const Interval& a, int bits);

enum class IntervalOp { Add, Mul, Div, Sqrt, Ln };

/// Dispatches to the operation above; throws std::invalid_argument on an
/// arity mismatch.
Interval interval_op(IntervalOp op, std::span<const Interval> args, int bits);

/// Rigorous enclosure of ln(x) for an exact positive rational, before the
/// final rounding to `bits`; width is O(2^-(bits + guard)).
Interval ln_enclosure(const Rational& x, int bits);

/// A rational upper bound on e^x - 1 for finite x >= 0 with relative
/// accuracy about 2^-bits.
Rational expm1_upper(const Rational& x, int bits);

}  // namespace numfuzz::numerics
