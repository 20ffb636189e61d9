#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "numfuzz/driver/validate.hpp"

namespace numfuzz::driver {

enum ExitCode { kOk = 0, kMismatch = 1, kParseError = 2, kInternalError = 3 };

struct CheckOptions {
  std::string path;
  std::string format = "binary64";
  bool json = false;
  /// Off gives time_ms = 0 everywhere, for byte-identical reports.
  bool timing = true;
};

struct EvalOptions {
  std::string path;
  std::string entry;
  std::string mode = "ideal";
  std::vector<std::string> args;
  std::string format = "binary64";
};

struct ValidateOptions {
  std::string path;
  std::string entry;
  int trials = 1000;
  std::uint64_t seed = 0;
  /// "LO:HI"; each end a decimal or 2^k.
  std::optional<std::string> range;
  std::optional<std::string> override_bound;
  int max_bits = 4096;
  std::string format = "binary64";
};

struct BenchOptions {
  std::string suite = "all";
  std::optional<std::string> golden;
  bool json = false;
  bool timing = true;
  std::string format = "binary64";
};

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err);
int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err);
int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err);
int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err);

/// Closed argument terms for `d` from decimal strings, one per num leaf of
/// the parameter types: monadic numbers become `rnd c`, boxes `[t {s}]`,
/// sums take the left injection.
std::vector<TermPtr> argument_terms(const Decl& d, const std::vector<std::string>& args,
                                    const numerics::FpFormat& fmt = numerics::FpFormat::binary64());

/// "LO:HI" with decimal or 2^k ends.
std::pair<Rational, Rational> parse_range(const std::string& text);

/// The type after `params` arrows of a curried function type.
Ty result_after(const Ty& fn, std::size_t params);

}  // namespace numfuzz::driver
