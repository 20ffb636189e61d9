#include "numfuzz/numerics/rational.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace numfuzz::numerics {

// Index of the single set bit when `z` is a power of two, else -1.
long power_of_two_exponent(const mpz_class& z) {
  if (sgn(z) <= 0) return -1;
  auto low = static_cast<long>(mpz_scan1(z.get_mpz_t(), 0));
  auto high = static_cast<long>(mpz_sizeinbase(z.get_mpz_t(), 2)) - 1;
  return low == high ? low : -1;
}

// Builds num / 2^shift in canonical form without a general gcd.
Rational make_dyadic(mpz_class num, long shift) {
  Rational out;
  if (sgn(num) == 0) return out;
  auto twos = static_cast<long>(mpz_scan1(num.get_mpz_t(), 0));
  long strip = std::min(twos, std::max(shift, 0L));
  if (strip > 0) mpz_fdiv_q_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(strip));
  shift -= strip;
  if (shift < 0) {
    mpz_mul_2exp(num.get_mpz_t(), num.get_mpz_t(), static_cast<mp_bitcnt_t>(-shift));
    shift = 0;
  }
  mpz_swap(mpq_numref(out.get_mpq_t()), num.get_mpz_t());
  mpz_set_ui(mpq_denref(out.get_mpq_t()), 1);
  mpz_mul_2exp(mpq_denref(out.get_mpq_t()), mpq_denref(out.get_mpq_t()),
               static_cast<mp_bitcnt_t>(shift));
  return out;
}

namespace {

mpz_class pow10(unsigned long n) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, n);
  return r;
}

}  // namespace

long floor_log2(const Rational& x) {
  const mpz_class& num = x.get_num();
  const mpz_class& den = x.get_den();
  long k = power_of_two_exponent(den);
  if (k >= 0) return static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) - 1 - k;
  long e = static_cast<long>(mpz_sizeinbase(num.get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(den.get_mpz_t(), 2));
  // 2^(e-1) < x < 2^(e+1); decide whether x >= 2^e.
  mpz_class lhs = num, rhs = den;
  if (e >= 0)
    mpz_mul_2exp(rhs.get_mpz_t(), rhs.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
  else
    mpz_mul_2exp(lhs.get_mpz_t(), lhs.get_mpz_t(), static_cast<mp_bitcnt_t>(-e));
  return cmp(lhs, rhs) >= 0 ? e : e - 1;
}

Rational ldexp(const Rational& x, long e) {
  Rational r(x);
  if (e > 0)
    mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(e));
  else if (e < 0)
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<mp_bitcnt_t>(-e));
  return r;
}

bool is_dyadic(const Rational& x) { return power_of_two_exponent(x.get_den()) >= 0; }

Rational exact_add(const Rational& a, const Rational& b) {
  long ea = power_of_two_exponent(a.get_den());
  long eb = power_of_two_exponent(b.get_den());
  if (ea < 0 || eb < 0) return Rational(a + b);
  long shift = std::max(ea, eb);
  mpz_class na = a.get_num(), nb = b.get_num();
  if (shift > ea) mpz_mul_2exp(na.get_mpz_t(), na.get_mpz_t(), static_cast<mp_bitcnt_t>(shift - ea));
  if (shift > eb) mpz_mul_2exp(nb.get_mpz_t(), nb.get_mpz_t(), static_cast<mp_bitcnt_t>(shift - eb));
  na += nb;
  return make_dyadic(std::move(na), shift);
}

Rational exact_mul(const Rational& a, const Rational& b) {
  long ea = power_of_two_exponent(a.get_den());
  long eb = power_of_two_exponent(b.get_den());
  if (ea < 0 || eb < 0) return Rational(a * b);
  mpz_class n = a.get_num() * b.get_num();
  return make_dyadic(std::move(n), ea + eb);
}

std::optional<Rational> parse_decimal(std::string_view text) {
  std::size_t i = 0;
  std::string digits;
  long frac_digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) digits += text[i++];
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      digits += text[i++];
      ++frac_digits;
    }
  }
  if (digits.empty()) return std::nullopt;
  long exponent = 0;
  if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool negative = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) negative = text[i++] == '-';
    std::string exp_digits;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) exp_digits += text[i++];
    if (exp_digits.empty() || exp_digits.size() > 6) return std::nullopt;
    exponent = std::strtol(exp_digits.c_str(), nullptr, 10);
    if (negative) exponent = -exponent;
  }
  if (i != text.size()) return std::nullopt;
  mpz_class mantissa(digits, 10);
  long scale = exponent - frac_digits;
  Rational r(mantissa);
  if (scale >= 0)
    r *= Rational(pow10(static_cast<unsigned long>(scale)));
  else
    r /= Rational(pow10(static_cast<unsigned long>(-scale)));
  r.canonicalize();
  return r;
}

std::string to_scientific(const Rational& x, int digits) {
  if (sgn(x) == 0) return "0." + std::string(static_cast<std::size_t>(digits - 1), '0') + "e0";
  // Estimate the decimal exponent, then fix it with exact comparisons.
  long e10 = static_cast<long>(std::floor(static_cast<double>(floor_log2(x)) * std::log10(2.0)));
  auto power = [](long e) {
    return e >= 0 ? Rational(pow10(static_cast<unsigned long>(e)))
                  : Rational(mpz_class(1), pow10(static_cast<unsigned long>(-e)));
  };
  while (x < power(e10)) --e10;
  while (x >= power(e10 + 1)) ++e10;
  // Round x / 10^(e10 - digits + 1) to an integer, ties to even.
  Rational scaled = x / power(e10 - digits + 1);
  mpz_class q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), scaled.get_num_mpz_t(), scaled.get_den_mpz_t());
  int c = cmp(mpz_class(2 * r), scaled.get_den());
  if (c > 0 || (c == 0 && mpz_odd_p(q.get_mpz_t()))) q += 1;
  if (q == pow10(static_cast<unsigned long>(digits))) {
    q = pow10(static_cast<unsigned long>(digits - 1));
    ++e10;
  }
  std::string m = q.get_str();
  std::string out = m.substr(0, 1);
  if (digits > 1) out += "." + m.substr(1);
  out += "e" + std::to_string(e10);
  return out;
}

std::optional<std::string> to_exact_decimal(const Rational& x, int max_digits) {
  mpz_class den = x.get_den();
  unsigned long twos = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), mpz_class(2).get_mpz_t());
  unsigned long fives = mpz_remove(den.get_mpz_t(), den.get_mpz_t(), mpz_class(5).get_mpz_t());
  if (den != 1) return std::nullopt;
  unsigned long places = std::max(twos, fives);
  mpz_class scaled = x.get_num() * pow10(places) / x.get_den();
  bool negative = sgn(scaled) < 0;
  if (negative) scaled = -scaled;
  std::string s = scaled.get_str();
  std::string stripped = s;
  while (stripped.size() > 1 && stripped.front() == '0') stripped.erase(stripped.begin());
  while (stripped.size() > 1 && stripped.back() == '0') stripped.pop_back();
  if (static_cast<int>(stripped.size()) > max_digits) return std::nullopt;
  if (s.size() <= places) s = std::string(places - s.size() + 1, '0') + s;
  std::string out = places == 0 ? s : s.substr(0, s.size() - places) + "." + s.substr(s.size() - places);
  return negative ? "-" + out : out;
}

}  // namespace numfuzz::numerics
