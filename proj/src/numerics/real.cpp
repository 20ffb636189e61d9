#include "numfuzz/numerics/real.hpp"

#include <cstdint>

#include "numfuzz/numerics/rational.hpp"

namespace numfuzz::numerics {

namespace {

constexpr int kStartBits = 128;
constexpr int kLevelGuard = 8;

bool perfect_square(const mpz_class& z) { return mpz_perfect_square_p(z.get_mpz_t()) != 0; }

mpz_class isqrt(const mpz_class& z) {
  mpz_class r;
  mpz_sqrt(r.get_mpz_t(), z.get_mpz_t());
  return r;
}

static_assert(sizeof(mp_limb_t) == sizeof(std::uint64_t));

constexpr int kLimbs = 4;

int bit_length(const mp_limb_t* m, int n) {
  return n == 0 ? 0 : 64 * (n - 1) + 64 - __builtin_clzll(m[n - 1]);
}

int trim(const mp_limb_t* m, int n) {
  while (n > 0 && m[n - 1] == 0) --n;
  return n;
}

// dst = src << shift, returning the limb count. dst holds kLimbs + 1 limbs
// and the result must fit.
int shift_left(mp_limb_t* dst, const mp_limb_t* src, int n, long shift) {
  int whole = static_cast<int>(shift / 64);
  unsigned bits = static_cast<unsigned>(shift % 64);
  for (int i = 0; i < whole; ++i) dst[i] = 0;
  if (bits == 0) {
    for (int i = 0; i < n; ++i) dst[whole + i] = src[i];
    return trim(dst, n + whole);
  }
  dst[whole + n] = mpn_lshift(dst + whole, src, n, bits);
  return trim(dst, n + whole + 1);
}

mpz_class to_mpz(const std::uint64_t* m, int n, bool neg) {
  mpz_t view;
  mpz_roinit_n(view, reinterpret_cast<const mp_limb_t*>(m), n);
  mpz_class z(view);
  if (neg) z = -z;
  return z;
}

}  // namespace

Real::Real() = default;

Real::Real(const std::uint64_t* mag, int size, bool neg, long exp) : size_(0), neg_(neg), exp_(exp) {
  const auto* m = reinterpret_cast<const mp_limb_t*>(mag);
  size = trim(m, size);
  if (size == 0) {
    neg_ = false;
    exp_ = 0;
    mag_[0] = 0;
    return;
  }
  auto tz = static_cast<long>(mpn_scan1(m, 0));
  int whole = static_cast<int>(tz / 64);
  unsigned bits = static_cast<unsigned>(tz % 64);
  size -= whole;
  auto* out = reinterpret_cast<mp_limb_t*>(mag_);
  if (bits == 0) {
    for (int i = 0; i < size; ++i) out[i] = m[whole + i];
  } else {
    mpn_rshift(out, m + whole, size, bits);
  }
  for (int i = size; i < kLimbs; ++i) out[i] = 0;
  size_ = trim(out, size);
  exp_ += tz;
}

Real::Real(Rational exact) {
  const mpz_srcptr num = exact.get_num_mpz_t();
  long k = power_of_two_exponent(exact.get_den());
  if (k >= 0 && mpz_sizeinbase(num, 2) <= static_cast<std::size_t>(kSmallBits)) {
    std::uint64_t m[kLimbs] = {0, 0, 0, 0};
    int n = static_cast<int>(mpz_size(num));
    for (int i = 0; i < n; ++i) m[i] = mpz_getlimbn(num, i);
    *this = Real(m, n, mpz_sgn(num) < 0, -k);
    return;
  }
  node_ = std::make_shared<const Node>(Node{Kind::Exact, std::move(exact), Real(), Real()});
}

Real::Real(Kind kind, Real lhs, Real rhs)
    : node_(std::make_shared<const Node>(Node{kind, Rational(0), std::move(lhs), std::move(rhs)})) {}

bool Real::is_exact() const { return !node_ || node_->kind == Kind::Exact; }

Rational Real::exact() const {
  if (node_) return node_->exact;
  return make_dyadic(to_mpz(mag_, size_, neg_), -exp_);
}

Real operator+(const Real& a, const Real& b) {
  if (a.small() && b.small()) {
    if (a.size_ == 0) return b;
    if (b.size_ == 0) return a;
    const Real& hi = a.exp_ >= b.exp_ ? a : b;
    const Real& lo = a.exp_ >= b.exp_ ? b : a;
    const auto* hm = reinterpret_cast<const mp_limb_t*>(hi.mag_);
    const auto* lm = reinterpret_cast<const mp_limb_t*>(lo.mag_);
    long shift = hi.exp_ - lo.exp_;
    if (shift < Real::kSmallBits && bit_length(hm, hi.size_) + shift < Real::kSmallBits) {
      mp_limb_t x[kLimbs + 1];
      int nx = shift_left(x, hm, hi.size_, shift);
      int ny = lo.size_;
      mp_limb_t r[kLimbs + 1] = {0, 0, 0, 0, 0};
      bool neg;
      int nr;
      if (hi.neg_ == lo.neg_) {
        neg = hi.neg_;
        if (nx >= ny) {
          r[nx] = mpn_add(r, x, nx, lm, ny);
          nr = nx + 1;
        } else {
          r[ny] = mpn_add(r, lm, ny, x, nx);
          nr = ny + 1;
        }
      } else {
        int c = nx != ny ? (nx > ny ? 1 : -1) : mpn_cmp(x, lm, nx);
        if (c == 0) return Real(Rational(0));
        if (c > 0) {
          mpn_sub(r, x, nx, lm, ny);
          nr = nx;
          neg = hi.neg_;
        } else {
          mpn_sub(r, lm, ny, x, nx);
          nr = ny;
          neg = lo.neg_;
        }
      }
      nr = trim(r, nr);
      if (nr <= kLimbs) return Real(reinterpret_cast<const std::uint64_t*>(r), nr, neg, lo.exp_);
    }
  }
  if (a.is_exact() && b.is_exact()) return Real(exact_add(a.exact(), b.exact()));
  return Real(Real::Kind::Add, a, b);
}

Real operator*(const Real& a, const Real& b) {
  if (a.small() && b.small()) {
    const auto* am = reinterpret_cast<const mp_limb_t*>(a.mag_);
    const auto* bm = reinterpret_cast<const mp_limb_t*>(b.mag_);
    if (a.size_ == 0 || b.size_ == 0) return Real(Rational(0));
    if (bit_length(am, a.size_) + bit_length(bm, b.size_) <= Real::kSmallBits) {
      mp_limb_t r[2 * kLimbs];
      if (a.size_ >= b.size_) mpn_mul(r, am, a.size_, bm, b.size_);
      else mpn_mul(r, bm, b.size_, am, a.size_);
      int nr = trim(r, a.size_ + b.size_);
      return Real(reinterpret_cast<const std::uint64_t*>(r), nr, a.neg_ != b.neg_, a.exp_ + b.exp_);
    }
  }
  if (a.is_exact() && b.is_exact()) return Real(exact_mul(a.exact(), b.exact()));
  return Real(Real::Kind::Mul, a, b);
}

Real operator/(const Real& a, const Real& b) {
  if (a.is_exact() && b.is_exact()) return Real(Rational(a.exact() / b.exact()));
  return Real(Real::Kind::Div, a, b);
}

Real sqrt(const Real& a) {
  if (a.is_exact() && perfect_square(a.exact().get_num()) && perfect_square(a.exact().get_den()))
    return Real(Rational(isqrt(a.exact().get_num()), isqrt(a.exact().get_den())));
  return Real(Real::Kind::Sqrt, a, Real());
}

Interval Real::enclose(int bits) const {
  if (is_exact()) return Interval::point(exact());
  const Node& n = *node_;
  int inner = bits + kLevelGuard;
  switch (n.kind) {
    case Kind::Add: return add(n.lhs.enclose(inner), n.rhs.enclose(inner), bits);
    case Kind::Mul: return mul(n.lhs.enclose(inner), n.rhs.enclose(inner), bits);
    case Kind::Div: return div(n.lhs.enclose(inner), n.rhs.enclose(inner), bits);
    case Kind::Sqrt: return sqrt(n.lhs.enclose(inner), bits);
  }
  throw std::logic_error("unreachable");
}

bool Real::less(const Real& a, const Real& b, int max_bits) {
  if (a.is_exact() && b.is_exact()) return a.exact() < b.exact();
  for (int bits = kStartBits; bits <= max_bits; bits *= 2) {
    Interval ia = a.enclose(bits), ib = b.enclose(bits);
    if (ia.hi() < ib.lo()) return true;
    if (ib.hi() <= ia.lo()) return false;
  }
  throw PrecisionExhausted("cannot order " + a.to_string() + " and " + b.to_string());
}

std::optional<Real> Real::rounded_up(const FpFormat& fmt, ExceptionalReason* why, int max_bits) const {
  if (small() && size_ > 0 && !neg_) {
    mp_limb_t m[kLimbs + 1] = {0, 0, 0, 0, 0};
    const auto* src = reinterpret_cast<const mp_limb_t*>(mag_);
    int n = size_;
    long e = exp_;
    long drop = bit_length(src, n) - fmt.precision;
    if (drop > 0) {
      // mag_ is odd, so dropping bits is always inexact
      int whole = static_cast<int>(drop / 64);
      unsigned bits = static_cast<unsigned>(drop % 64);
      n -= whole;
      if (bits == 0) {
        for (int i = 0; i < n; ++i) m[i] = src[whole + i];
      } else {
        mpn_rshift(m, src + whole, n, bits);
      }
      m[n] = mpn_add_1(m, m, n, 1);
      n = trim(m, n + 1);
      e += drop;
    } else {
      for (int i = 0; i < n; ++i) m[i] = src[i];
    }
    long top = bit_length(m, n) - 1 + e;
    if (top > fmt.emax || top < fmt.emin()) {
      if (why) *why = top > fmt.emax ? ExceptionalReason::Overflow : ExceptionalReason::Underflow;
      return std::nullopt;
    }
    return Real(reinterpret_cast<const std::uint64_t*>(m), n, false, e);
  }
  RoundResult r = round_up(fmt, max_bits);
  if (r.is_exceptional()) {
    if (why) *why = r.reason();
    return std::nullopt;
  }
  return Real(std::move(r).value());
}

RoundResult Real::round_up(const FpFormat& fmt, int max_bits) const {
  if (is_exact()) return numerics::round_up(exact(), fmt);
  if (node_->kind == Kind::Sqrt && node_->lhs.is_exact()) return sqrt_round_up(node_->lhs.exact(), fmt);
  for (int bits = std::max(kStartBits, 2 * fmt.precision); bits <= max_bits; bits *= 2) {
    Interval enclosure = enclose(bits);
    if (sgn(enclosure.lo()) <= 0) continue;
    RoundResult lo = numerics::round_up(enclosure.lo(), fmt);
    RoundResult hi = numerics::round_up(enclosure.hi(), fmt);
    if (lo == hi) return lo;
  }
  throw PrecisionExhausted("cannot round " + to_string() + " into " + fmt.name());
}

bool operator==(const Real& a, const Real& b) {
  if (a.small() && b.small()) {
    if (a.size_ != b.size_ || a.neg_ != b.neg_ || a.exp_ != b.exp_) return false;
    for (int i = 0; i < a.size_; ++i)
      if (a.mag_[i] != b.mag_[i]) return false;
    return true;
  }
  if (a.node_ == b.node_) return true;
  if (a.is_exact() != b.is_exact()) return false;
  if (a.is_exact()) return a.exact() == b.exact();
  return a.node_->kind == b.node_->kind && a.node_->lhs == b.node_->lhs && a.node_->rhs == b.node_->rhs;
}

std::string Real::to_string() const {
  if (is_exact()) return exact().get_str();
  const Node& n = *node_;
  switch (n.kind) {
    case Kind::Add: return "(" + n.lhs.to_string() + " + " + n.rhs.to_string() + ")";
    case Kind::Mul: return "(" + n.lhs.to_string() + " * " + n.rhs.to_string() + ")";
    case Kind::Div: return "(" + n.lhs.to_string() + " / " + n.rhs.to_string() + ")";
    case Kind::Sqrt: return "sqrt(" + n.lhs.to_string() + ")";
  }
  return "?";
}

std::string Real::to_decimal(int digits) const {
  if (is_exact()) return to_scientific(exact(), digits);
  Interval e = enclose(4 * digits + 32);
  return to_scientific(Rational((e.lo() + e.hi()) / 2), digits);
}

}  // namespace numfuzz::numerics
