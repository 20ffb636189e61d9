#include "numfuzz/numerics/interval.hpp"

#include <stdexcept>
#include <utility>

#include "numfuzz/numerics/rational.hpp"
#include "numfuzz/numerics/rounding.hpp"

namespace numfuzz::numerics {

namespace {

constexpr int kGuardBits = 16;

Rational down(const Rational& x, int bits) { return round_to_precision(x, bits, Direction::Down); }
Rational up(const Rational& x, int bits) { return round_to_precision(x, bits, Direction::Up); }

void require_positive(const Interval& x, const char* what) {
  if (!x.is_positive()) throw std::domain_error(std::string(what) + " requires a positive interval");
}

mpz_class scaled_floor(const Rational& x, long w) {
  Rational s = ldexp(x, w);
  mpz_class q;
  mpz_fdiv_q(q.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
  return q;
}

mpz_class scaled_ceil(const Rational& x, long w) {
  Rational s = ldexp(x, w);
  mpz_class q;
  mpz_cdiv_q(q.get_mpz_t(), s.get_num_mpz_t(), s.get_den_mpz_t());
  return q;
}

mpz_class shift_floor(const mpz_class& x, long w) {
  mpz_class q;
  mpz_fdiv_q_2exp(q.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(w));
  return q;
}

mpz_class shift_ceil(const mpz_class& x, long w) {
  mpz_class q;
  mpz_cdiv_q_2exp(q.get_mpz_t(), x.get_mpz_t(), static_cast<mp_bitcnt_t>(w));
  return q;
}

// Fixed-point bounds [lo, hi] * 2^-w on atanh(z) for 0 < z <= 1/3, using
// atanh z = sum z^(2i+1) / (2i+1). The tail after the last term taken is
// below z^(2i+1) / (1 - z^2) <= 2 ulps.
std::pair<mpz_class, mpz_class> atanh_fixed(const Rational& z, long w) {
  mpz_class z_lo = scaled_floor(z, w), z_hi = scaled_ceil(z, w);
  mpz_class z2_lo = shift_floor(z_lo * z_lo, w), z2_hi = shift_ceil(z_hi * z_hi, w);
  mpz_class p_lo = z_lo, p_hi = z_hi, sum_lo = 0, sum_hi = 0, term;
  for (unsigned long odd = 1; p_hi > 1; odd += 2) {
    mpz_fdiv_q_ui(term.get_mpz_t(), p_lo.get_mpz_t(), odd);
    sum_lo += term;
    mpz_cdiv_q_ui(term.get_mpz_t(), p_hi.get_mpz_t(), odd);
    sum_hi += term;
    p_lo = shift_floor(p_lo * z2_lo, w);
    p_hi = shift_ceil(p_hi * z2_hi, w);
  }
  sum_hi += 2;
  return {sum_lo, sum_hi};
}

Rational from_fixed(const mpz_class& x, long w) { return ldexp(Rational(x), -w); }

}  // namespace

Interval::Interval(Rational lo, Rational hi) : lo_(std::move(lo)), hi_(std::move(hi)) {
  if (lo_ > hi_) throw std::invalid_argument("interval with lo > hi");
}

std::string Interval::to_string() const {
  return "[" + lo_.get_str() + ", " + hi_.get_str() + "]";
}

Interval outward(const Interval& x, int bits) { return Interval(down(x.lo(), bits), up(x.hi(), bits)); }

Interval add(const Interval& a, const Interval& b, int bits) {
  return Interval(down(exact_add(a.lo(), b.lo()), bits), up(exact_add(a.hi(), b.hi()), bits));
}

Interval mul(const Interval& a, const Interval& b, int bits) {
  require_positive(a, "mul");
  require_positive(b, "mul");
  return Interval(down(exact_mul(a.lo(), b.lo()), bits), up(exact_mul(a.hi(), b.hi()), bits));
}

Interval div(const Interval& a, const Interval& b, int bits) {
  require_positive(a, "div");
  require_positive(b, "div");
  return Interval(down(Rational(a.lo() / b.hi()), bits), up(Rational(a.hi() / b.lo()), bits));
}

Interval sqrt(const Interval& a, int bits) {
  if (sgn(a.lo()) < 0) throw std::domain_error("sqrt requires a non-negative interval");
  return Interval(sqrt_to_precision(a.lo(), bits, Direction::Down),
                  sqrt_to_precision(a.hi(), bits, Direction::Up));
}

Interval ln_enclosure(const Rational& x, int bits) {
  if (sgn(x) <= 0) throw std::domain_error("ln requires a positive value");
  if (x == 1) return Interval::point(Rational(0));
  // x = m * 2^k with m in (1/sqrt2, sqrt2].
  long k = floor_log2(x);
  Rational m = ldexp(x, -k);
  if (m * m > 2) {
    ++k;
    m = ldexp(m, -1);
  }
  Rational z = (m - 1) / (m + 1);
  int zsign = sgn(z);
  Rational abs_z = zsign < 0 ? Rational(-z) : z;

  // Enough fixed-point bits for `bits` of relative accuracy even when ln x is
  // tiny (z small) or large (|k| large).
  long w = bits + kGuardBits;
  if (zsign != 0) w += std::max(0L, -floor_log2(abs_z));
  w += static_cast<long>(mpz_sizeinbase(mpz_class(k).get_mpz_t(), 2));

  mpz_class lo = 0, hi = 0;
  if (zsign != 0) {
    auto [a_lo, a_hi] = atanh_fixed(abs_z, w);
    if (zsign > 0) {
      lo = 2 * a_lo;
      hi = 2 * a_hi;
    } else {
      lo = -2 * a_hi;
      hi = -2 * a_lo;
    }
  }
  if (k != 0) {
    // ln 2 = 2 atanh(1/3).
    auto [l_lo, l_hi] = atanh_fixed(Rational(1, 3), w);
    mpz_class kk = k;
    if (k > 0) {
      lo += 2 * kk * l_lo;
      hi += 2 * kk * l_hi;
    } else {
      lo += 2 * kk * l_hi;
      hi += 2 * kk * l_lo;
    }
  }
  return Interval(from_fixed(lo, w), from_fixed(hi, w));
}

Interval ln(const Interval& a, int bits) {
  require_positive(a, "ln");
  Interval at_lo = ln_enclosure(a.lo(), bits);
  if (a.lo() == a.hi()) return outward(at_lo, bits);
  return Interval(down(at_lo.lo(), bits), up(ln_enclosure(a.hi(), bits).hi(), bits));
}

Interval interval_op(IntervalOp op, std::span<const Interval> args, int bits) {
  auto need = [&](std::size_t n) {
    if (args.size() != n) throw std::invalid_argument("interval_op: wrong number of arguments");
  };
  switch (op) {
    case IntervalOp::Add: need(2); return add(args[0], args[1], bits);
    case IntervalOp::Mul: need(2); return mul(args[0], args[1], bits);
    case IntervalOp::Div: need(2); return div(args[0], args[1], bits);
    case IntervalOp::Sqrt: need(1); return sqrt(args[0], bits);
    case IntervalOp::Ln: need(1); return ln(args[0], bits);
  }
  throw std::invalid_argument("interval_op: unknown operation");
}

Rational expm1_upper(const Rational& x, int bits) {
  if (sgn(x) < 0) throw std::domain_error("expm1_upper requires x >= 0");
  if (sgn(x) == 0) return Rational(0);
  const int work = bits + kGuardBits;
  // Halve until a <= 1/2, then square back with e^(2a) - 1 = s (s + 2).
  long halvings = 0;
  Rational a = x;
  while (a > Rational(1, 2)) {
    a = ldexp(a, -1);
    ++halvings;
  }
  // sum_{k>=1} a^k / k!, each term rounded up; the tail after term t_k is
  // below t_k * a / (k + 1) / (1 - a / (k + 2)) <= 2 t_k.
  Rational sum = 0, term = a;
  for (unsigned long k = 1;; ++k) {
    sum += term;
    term = up(Rational(term * a / static_cast<long>(k + 1)), work);
    if (term < ldexp(sum, -work)) break;
  }
  sum = up(Rational(sum + 2 * term), work);
  for (long i = 0; i < halvings; ++i) sum = up(Rational(sum * (sum + 2)), work);
  return sum;
}

}  // namespace numfuzz::numerics
