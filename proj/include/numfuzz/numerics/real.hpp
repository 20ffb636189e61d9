#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>

#include "numfuzz/numerics/interval.hpp"
#include "numfuzz/numerics/rounding.hpp"

namespace numfuzz::numerics {

/// Raised when a comparison or rounding of an irrational value cannot be
/// decided at the maximum working precision.
class PrecisionExhausted : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A positive real number: exact rational when closed under the operations
/// applied so far, otherwise an expression over exact leaves that can be
/// enclosed to any precision. Copies share the representation.
class Real {
 public:
  /// The number 1.
  Real();
  Real(Rational exact);

  bool is_exact() const;
  /// Precondition: is_exact().
  Rational exact() const;

  /// Outward enclosure at `bits` of working precision.
  Interval enclose(int bits) const;

  friend Real operator+(const Real& a, const Real& b);
  friend Real operator*(const Real& a, const Real& b);
  friend Real operator/(const Real& a, const Real& b);
  friend Real sqrt(const Real& a);

  /// Exact when both sides are exact; otherwise by enclosure refinement.
  /// Throws PrecisionExhausted when the sides cannot be separated.
  static bool less(const Real& a, const Real& b, int max_bits = 4096);

  /// Round toward +inf into `fmt`.
  RoundResult round_up(const FpFormat& fmt, int max_bits = 4096) const;
  /// round_up with the result kept as a Real; nullopt on the exceptional
  /// marker, whose reason goes to `why`.
  std::optional<Real> rounded_up(const FpFormat& fmt, ExceptionalReason* why, int max_bits = 4096) const;

  /// Same structure and same exact leaves.
  friend bool operator==(const Real& a, const Real& b);

  /// Exact "p/q" or a symbolic rendering such as "sqrt(2)".
  std::string to_string() const;
  /// Decimal approximation with `digits` significant digits.
  std::string to_decimal(int digits = 17) const;

 private:
  enum class Kind { Exact, Add, Mul, Div, Sqrt };
  struct Node;
  Real(Kind kind, Real lhs, Real rhs);
  explicit Real(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  Real(const std::uint64_t* mag, int size, bool neg, long exp);
  bool small() const { return !node_; }

  // Without a node the value is (-1)^neg_ * mag_ * 2^exp_, with mag_ odd and
  // below 2^kSmallBits (or zero, with exp_ 0). size_ counts the significant
  // limbs. Dyadics that fit always take this form.
  static constexpr int kLimbs = 4;
  static constexpr int kSmallBits = 250;
  std::uint64_t mag_[kLimbs] = {1, 0, 0, 0};
  int size_ = 1;
  bool neg_ = false;
  long exp_ = 0;
  std::shared_ptr<const Node> node_;
};

struct Real::Node {
  Kind kind;
  Rational exact;
  Real lhs;
  Real rhs;
};

}  // namespace numfuzz::numerics
