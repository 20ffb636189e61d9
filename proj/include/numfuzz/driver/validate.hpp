#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "numfuzz/eval/eval.hpp"

namespace numfuzz::driver {

struct ValidationConfig {
  int trials = 1000;
  std::uint64_t seed = 0;
  /// Inputs are drawn log-uniformly from [lo, hi]; 0 < lo <= hi.
  Rational lo{1, 256};
  Rational hi{256};
  int max_bits = 4096;
  /// Replaces the bound of every monadic result leaf.
  std::optional<Grade> override_bound;
  numerics::FpFormat fmt = numerics::FpFormat::binary64();
};

struct ValidationSummary {
  int trials = 0;
  int certified = 0;
  int violations = 0;
  int inconclusive = 0;
  /// Runs where plain fp evaluation hit an exceptional rounding.
  int exceptional = 0;
  /// Largest observed RP distance over its bound.
  double max_ratio = 0;
  /// First few failures, for the report.
  std::vector<std::string> incidents;

  bool ok() const { return violations == 0 && inconclusive == 0 && exceptional == 0; }
};

/// A representable value of `fmt` drawn log-uniformly from [lo, hi].
Rational sample_input(std::mt19937_64& rng, const Rational& lo, const Rational& hi, const numerics::FpFormat& fmt);

/// Arguments for one trial, built from the parameter types: num takes a
/// sample c, M[r]t the evaluated `rnd c` (c is representable, so both modes
/// agree), ![s]t a box, pairs both components, sums the left injection.
std::vector<eval::Value> sample_arguments(const Decl& d, std::mt19937_64& rng, const ValidationConfig& cfg);

/// Runs `entry` in the ideal and fp semantics on `cfg.trials` seeded inputs
/// and certifies every numeric leaf of `result` against its monadic grade.
/// Trial i draws from a generator seeded with (seed, i). Throws
/// std::invalid_argument when `result` has no finite monadic grade.
ValidationSummary validate(const GlobalEnv& env, const std::string& entry, const Ty& result,
                           const ValidationConfig& cfg);

std::string render_summary(const std::string& entry, const ValidationConfig& cfg, const ValidationSummary& s);

}  // namespace numfuzz::driver
