#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>

namespace numfuzz {

using Rational = mpq_class;

/// A non-negative exact rational extended with a top element (infinity).
///
/// Grades index both bang types (sensitivities) and monadic types (error
/// budgets). Arithmetic is exact; `0 * inf == inf * 0 == 0`.
class Grade {
 public:
  Grade() = default;
  /// Throws std::invalid_argument on a negative value.
  explicit Grade(Rational value);
  explicit Grade(long value) : Grade(Rational(value)) {}

  static Grade zero() { return Grade(); }
  static Grade one() { return Grade(1L); }
  static Grade infinity();
  /// 2^exponent, exactly.
  static Grade pow2(long exponent);

  bool is_infinite() const { return infinite_; }
  bool is_zero() const { return !infinite_ && sgn(value_) == 0; }
  /// Finite value; meaningless when is_infinite().
  const Rational& value() const { return value_; }

  friend Grade operator+(const Grade& a, const Grade& b);
  friend Grade operator*(const Grade& a, const Grade& b);
  Grade& operator+=(const Grade& other) { return *this = *this + other; }
  Grade& operator*=(const Grade& other) { return *this = *this * other; }

  friend bool operator==(const Grade& a, const Grade& b);
  friend std::strong_ordering operator<=>(const Grade& a, const Grade& b);

  /// Exact "p/q" form, or "inf".
  std::string to_rational_string() const;

 private:
  Rational value_{0};
  bool infinite_ = false;
};

enum class GradeOp { Add, Mul, Max, Min };

Grade grade_arith(GradeOp op, const Grade& a, const Grade& b);
Grade max(const Grade& a, const Grade& b);
Grade min(const Grade& a, const Grade& b);

}  // namespace numfuzz
