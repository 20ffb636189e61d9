#include "numfuzz/grade.hpp"

#include <stdexcept>

namespace numfuzz {

Grade::Grade(Rational value) : value_(std::move(value)) {
  value_.canonicalize();
  if (sgn(value_) < 0) throw std::invalid_argument("grade must be non-negative");
}

Grade Grade::infinity() {
  Grade g;
  g.infinite_ = true;
  return g;
}

Grade Grade::pow2(long exponent) {
  Rational r(1);
  if (exponent >= 0)
    mpz_mul_2exp(r.get_num_mpz_t(), r.get_num_mpz_t(), static_cast<mp_bitcnt_t>(exponent));
  else
    mpz_mul_2exp(r.get_den_mpz_t(), r.get_den_mpz_t(), static_cast<mp_bitcnt_t>(-exponent));
  return Grade(std::move(r));
}

Grade operator+(const Grade& a, const Grade& b) {
  if (a.infinite_ || b.infinite_) return Grade::infinity();
  return Grade(Rational(a.value_ + b.value_));
}

Grade operator*(const Grade& a, const Grade& b) {
  if (a.is_zero() || b.is_zero()) return Grade();
  if (a.infinite_ || b.infinite_) return Grade::infinity();
  return Grade(Rational(a.value_ * b.value_));
}

bool operator==(const Grade& a, const Grade& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const Grade& a, const Grade& b) {
  if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
  if (a.infinite_) return std::strong_ordering::greater;
  if (b.infinite_) return std::strong_ordering::less;
  int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

std::string Grade::to_rational_string() const {
  if (infinite_) return "inf";
  return value_.get_str();
}

Grade max(const Grade& a, const Grade& b) { return a < b ? b : a; }
Grade min(const Grade& a, const Grade& b) { return a < b ? a : b; }

Grade grade_arith(GradeOp op, const Grade& a, const Grade& b) {
  switch (op) {
    case GradeOp::Add: return a + b;
    case GradeOp::Mul: return a * b;
    case GradeOp::Max: return max(a, b);
    case GradeOp::Min: return min(a, b);
  }
  return a;
}

}  // namespace numfuzz
