#include "numfuzz/numerics/format.hpp"

#include <charconv>
#include <stdexcept>

#include "numfuzz/numerics/rational.hpp"

namespace numfuzz::numerics {

namespace {

long parse_field(std::string_view text, std::string_view key) {
  if (text.substr(0, key.size()) != key) throw std::invalid_argument("bad format field");
  text.remove_prefix(key.size());
  long value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw std::invalid_argument("bad format field");
  return value;
}

}  // namespace

FpFormat FpFormat::parse(std::string_view text) {
  if (text == "binary64") return binary64();
  if (text == "binary32") return binary32();
  auto comma = text.find(',');
  if (comma == std::string_view::npos)
    throw std::invalid_argument("unknown format '" + std::string(text) + "'");
  try {
    FpFormat fmt;
    fmt.precision = static_cast<int>(parse_field(text.substr(0, comma), "p="));
    fmt.emax = parse_field(text.substr(comma + 1), "emax=");
    if (fmt.precision < 2 || fmt.emax < 1) throw std::invalid_argument("range");
    return fmt;
  } catch (const std::invalid_argument&) {
    throw std::invalid_argument("unknown format '" + std::string(text) +
                                "' (expected binary64, binary32 or p=<int>,emax=<int>)");
  }
}

std::string FpFormat::name() const {
  if (*this == binary64()) return "binary64";
  if (*this == binary32()) return "binary32";
  return "p=" + std::to_string(precision) + ",emax=" + std::to_string(emax);
}

Rational FpFormat::max_finite() const {
  mpz_class significand = 1;
  significand <<= static_cast<mp_bitcnt_t>(precision);
  significand -= 1;
  return ldexp(Rational(significand), emax - precision + 1);
}

Rational FpFormat::min_normal() const { return ldexp(Rational(1), emin()); }

Grade unit_roundoff(const FpFormat& fmt) { return Grade::pow2(1 - fmt.precision); }

}  // namespace numfuzz::numerics
