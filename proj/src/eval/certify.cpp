#include <cmath>

#include "numfuzz/eval/eval.hpp"
#include "numfuzz/numerics/relprec.hpp"

namespace numfuzz::eval {

using numerics::Interval;
using numerics::Real;

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "certified";
    case Verdict::Violation: return "violation";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

double approx_distance(const Rational& x, const Rational& y) {
  Rational q = x / y - 1;
  return std::fabs(std::log1p(q.get_d()));
}

double midpoint(const Interval& i) { return Rational((i.lo() + i.hi()) / 2).get_d(); }

}  // namespace

Certificate certify_rp(const Real& ideal, const Real& fp, const Grade& bound, int max_bits) {
  Certificate out;
  if (bound.is_infinite()) {
    out.verdict = Verdict::Certified;
    return out;
  }
  if (ideal == fp) {
    out.distance = 0;
    out.verdict = Verdict::Certified;
    return out;
  }
  const Rational& r = bound.value();
  if (ideal.is_exact() && fp.is_exact()) {
    const Rational x = ideal.exact();
    const Rational y = fp.exact();
    out.distance = approx_distance(x, y);
    if (x == y) {
      out.verdict = Verdict::Certified;
      return out;
    }
    // 1 + r + r^2/2 <= e^r, and e^r <= 1 + r + r^2 when r <= 1
    Rational below = 1 + r + r * r / 2;
    if (x <= y * below && y <= x * below) {
      out.verdict = Verdict::Certified;
      return out;
    }
    if (r <= 1) {
      Rational above = 1 + r + r * r;
      if (x > y * above || y > x * above) {
        out.verdict = Verdict::Violation;
        return out;
      }
    }
  }
  for (int bits = 128; bits <= max_bits; bits *= 2) {
    Interval d = numerics::rp_distance(ideal.enclose(bits), fp.enclose(bits), bits);
    out.distance = midpoint(d);
    out.bits = bits;
    if (d.hi() <= r) {
      out.verdict = Verdict::Certified;
      return out;
    }
    if (d.lo() > r) {
      out.verdict = Verdict::Violation;
      return out;
    }
  }
  out.verdict = Verdict::Inconclusive;
  return out;
}

}  // namespace numfuzz::eval
