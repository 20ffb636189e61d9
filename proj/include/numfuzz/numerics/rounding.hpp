#pragma once

#include <variant>

#include "numfuzz/numerics/format.hpp"

namespace numfuzz::numerics {

enum class Direction { Down, Up };

/// Rounds x to `bits` significant bits in the given direction with an
/// unbounded exponent. Works for any sign; zero maps to zero.
Rational round_to_precision(const Rational& x, int bits, Direction dir);

/// Directed `bits`-bit rounding of sqrt(x), decided exactly. Requires x >= 0.
Rational sqrt_to_precision(const Rational& x, int bits, Direction dir);

enum class ExceptionalReason { Overflow, Underflow };

const char* to_string(ExceptionalReason reason);

/// Either a positive normal value of the format or the exceptional marker.
class RoundResult {
 public:
  RoundResult(Rational value) : state_(std::move(value)) {}
  RoundResult(ExceptionalReason reason) : state_(reason) {}

  bool is_exceptional() const { return std::holds_alternative<ExceptionalReason>(state_); }
  const Rational& value() const& { return std::get<Rational>(state_); }
  Rational&& value() && { return std::get<Rational>(std::move(state_)); }
  ExceptionalReason reason() const { return std::get<ExceptionalReason>(state_); }

  friend bool operator==(const RoundResult&, const RoundResult&) = default;

 private:
  std::variant<Rational, ExceptionalReason> state_;
};

/// Round toward +inf: the least positive normal value of `fmt` that is >= x.
/// Overflow when that exceeds max_finite(); underflow when the rounding lands
/// below min_normal(), where the RP <= eps guarantee no longer holds.
/// Requires x > 0.
RoundResult round_up(const Rational& x, const FpFormat& fmt);

/// Least normal d with d*d >= x, exceptional cases as for round_up.
RoundResult sqrt_round_up(const Rational& x, const FpFormat& fmt);

/// True when x is a positive normal value of fmt.
bool is_representable(const Rational& x, const FpFormat& fmt);

}  // namespace numfuzz::numerics
