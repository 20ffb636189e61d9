#include "numfuzz/numerics/rounding.hpp"

#include <stdexcept>

#include "numfuzz/numerics/rational.hpp"

namespace numfuzz::numerics {

namespace {

// x * 2^shift as num/den integers.
void scaled_parts(const Rational& x, long shift, mpz_class& num, mpz_class& den) {
  num = x.get_num();
  den = x.get_den();
  if (shift >= 0)
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(shift));
  else
    mpz_mul_2exp(den.get_mpz_t(), den.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
}

Rational round_positive(const Rational& x, int bits, Direction dir) {
  long k = power_of_two_exponent(x.get_den());
  if (k >= 0) {
    const mpz_srcptr num = x.get_num_mpz_t();
    long drop = static_cast<long>(mpz_sizeinbase(num, 2)) - bits;
    if (drop <= 0) return x;
    mpz_class m;
    mpz_fdiv_q_2exp(m.get_mpz_t(), num, static_cast<mp_bitcnt_t>(drop));
    if (dir == Direction::Up && static_cast<long>(mpz_scan1(num, 0)) < drop) m += 1;
    return make_dyadic(std::move(m), k - drop);
  }
  long e = floor_log2(x);
  long shift = bits - 1 - e;
  mpz_class num, den, m;
  scaled_parts(x, shift, num, den);
  if (dir == Direction::Up)
    mpz_cdiv_q(m.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  else
    mpz_fdiv_q(m.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return ldexp(Rational(m), -shift);
}

// d already has at most p significant bits, so its binade decides the range.
RoundResult classify(Rational d, const FpFormat& fmt) {
  long e = floor_log2(d);
  if (e > fmt.emax) return ExceptionalReason::Overflow;
  if (e < fmt.emin()) return ExceptionalReason::Underflow;
  return d;
}

}  // namespace

const char* to_string(ExceptionalReason reason) {
  return reason == ExceptionalReason::Overflow ? "overflow" : "underflow";
}

Rational round_to_precision(const Rational& x, int bits, Direction dir) {
  int s = sgn(x);
  if (s == 0) return Rational(0);
  if (s > 0) return round_positive(x, bits, dir);
  Direction flipped = dir == Direction::Up ? Direction::Down : Direction::Up;
  return Rational(-round_positive(Rational(-x), bits, flipped));
}

Rational sqrt_to_precision(const Rational& x, int bits, Direction dir) {
  if (sgn(x) < 0) throw std::domain_error("sqrt of a negative value");
  if (sgn(x) == 0) return Rational(0);
  // floor(log2 sqrt(x)) == floor(floor_log2(x) / 2).
  long f = floor_log2(x);
  long e = f >= 0 ? f / 2 : -((-f + 1) / 2);
  long k = bits - 1 - e;
  // m = sqrt(x * 4^k), rounded; the result is m * 2^-k.
  mpz_class num, den, floor_y, m;
  scaled_parts(x, 2 * k, num, den);
  mpz_fdiv_q(floor_y.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  mpz_sqrt(m.get_mpz_t(), floor_y.get_mpz_t());
  if (dir == Direction::Up && m * m * den != num) m += 1;
  return ldexp(Rational(m), -k);
}

RoundResult round_up(const Rational& x, const FpFormat& fmt) {
  if (sgn(x) <= 0) throw std::domain_error("round_up requires a positive value");
  return classify(round_positive(x, fmt.precision, Direction::Up), fmt);
}

RoundResult sqrt_round_up(const Rational& x, const FpFormat& fmt) {
  if (sgn(x) <= 0) throw std::domain_error("sqrt_round_up requires a positive value");
  return classify(sqrt_to_precision(x, fmt.precision, Direction::Up), fmt);
}

bool is_representable(const Rational& x, const FpFormat& fmt) {
  if (sgn(x) <= 0) return false;
  if (x > fmt.max_finite() || x < fmt.min_normal()) return false;
  return round_positive(x, fmt.precision, Direction::Down) == x;
}

}  // namespace numfuzz::numerics
