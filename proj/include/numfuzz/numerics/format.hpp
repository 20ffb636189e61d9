#pragma once

#include <string>
#include <string_view>

#include "numfuzz/grade.hpp"

namespace numfuzz::numerics {

/// A binary floating-point format with precision `precision` (bits of
/// significand, hidden bit included) and exponent range [1 - emax, emax].
struct FpFormat {
  int precision = 53;
  long emax = 1023;

  long emin() const { return 1 - emax; }

  static FpFormat binary64() { return {53, 1023}; }
  static FpFormat binary32() { return {24, 127}; }

  /// Accepts "binary64", "binary32" or "p=<int>,emax=<int>".
  /// Throws std::invalid_argument on anything else.
  static FpFormat parse(std::string_view text);
  std::string name() const;

  /// Largest finite value, (2^p - 1) * 2^(emax - p + 1).
  Rational max_finite() const;
  /// Smallest positive normal value, 2^emin.
  Rational min_normal() const;

  friend bool operator==(const FpFormat&, const FpFormat&) = default;
};

/// 2^(1-p): the per-rounding RP bound under round toward +inf.
Grade unit_roundoff(const FpFormat& fmt);

}  // namespace numfuzz::numerics
