#pragma once

#include <stdexcept>
#include <string>

#include "numfuzz/numerics/interval.hpp"

namespace numfuzz::numerics {

/// Enclosure of the relative-precision distance |ln(x / y)| between two
/// positive quantities, given as enclosures.
Interval rp_distance(const Interval& x, const Interval& y, int bits);

class AlphaTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Relative-error bound implied by an RP bound alpha: e^alpha - 1.
struct RelErrorBound {
  std::string text;      // 3 significant digits, or "inf"
  Rational upper;        // rigorous upper bound; meaningless when infinite
  bool infinite = false;
};

/// Throws AlphaTooLarge when alpha >= 1 and e^alpha - 1 exceeds the binary64
/// range used for display.
RelErrorBound rp_to_rel(const Grade& alpha);

/// Decimal display of a grade with 3 significant digits ("inf" for infinity).
std::string grade_decimal(const Grade& g);

}  // namespace numfuzz::numerics
