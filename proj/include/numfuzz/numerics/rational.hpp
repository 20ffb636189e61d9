#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "numfuzz/grade.hpp"

namespace numfuzz::numerics {

/// Largest e with 2^e <= x. Requires x > 0.
long floor_log2(const Rational& x);

/// x * 2^e, exactly.
Rational ldexp(const Rational& x, long e);

bool is_dyadic(const Rational& x);

/// Index of the single set bit when z is a power of two, else -1.
long power_of_two_exponent(const mpz_class& z);

/// num / 2^shift in canonical form, without a general gcd.
Rational make_dyadic(mpz_class num, long shift);

/// Exact sum and product with a fast path for dyadic operands.
Rational exact_add(const Rational& a, const Rational& b);
Rational exact_mul(const Rational& a, const Rational& b);

/// Parses an unsigned decimal literal such as "0.1", "2.0" or "1e-5" into an
/// exact rational. Returns nullopt on malformed input.
std::optional<Rational> parse_decimal(std::string_view text);

/// Scientific notation with `digits` significant digits, rounding half to
/// even on the exact value: 2^-51 -> "4.44e-16", 0 -> "0.00e0".
/// Requires x >= 0.
std::string to_scientific(const Rational& x, int digits = 3);

/// Exact decimal expansion if x has a terminating one with at most
/// `max_digits` significant digits.
std::optional<std::string> to_exact_decimal(const Rational& x, int max_digits = 20);

}  // namespace numfuzz::numerics
