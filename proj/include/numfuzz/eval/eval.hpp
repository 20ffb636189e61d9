#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "numfuzz/core/term.hpp"
#include "numfuzz/numerics/interval.hpp"
#include "numfuzz/numerics/real.hpp"
#include "numfuzz/numerics/rounding.hpp"
#include "numfuzz/typing/infer.hpp"

namespace numfuzz::eval {

enum class Mode { Ideal, Fp, FpExceptional };

const char* to_string(Mode m);
/// "ideal", "fp" or "fp-exceptional"; nullopt otherwise.
std::optional<Mode> parse_mode(std::string_view text);

/// No rule applies to a term that is not a value. Well-typed closed terms
/// never get stuck, so this points at an evaluator or checker bug.
class Stuck : public std::runtime_error {
 public:
  explicit Stuck(const std::string& what) : std::runtime_error(what) {}
};

/// Rounding produced the exceptional marker in plain fp mode.
class NonRepresentable : public std::runtime_error {
 public:
  explicit NonRepresentable(numerics::ExceptionalReason reason);
  numerics::ExceptionalReason reason() const { return reason_; }

 private:
  numerics::ExceptionalReason reason_;
};

class FuelExhausted : public std::runtime_error {
 public:
  FuelExhausted() : std::runtime_error("evaluation ran out of fuel") {}
};

constexpr std::uint64_t kDefaultFuel = 100'000'000;

/// One reduction of a closed term under the given mode: call-by-value, left to
/// right, with `rnd k` stepping to `ret k` (ideal), `ret round_up(k)` (fp) or
/// `err` on an exceptional rounding (fp-exceptional). Global names step to
/// their definitions. Returns null when `e` is already a value.
TermPtr step(const TermPtr& e, Mode mode, const GlobalEnv& globals,
             const numerics::FpFormat& fmt = numerics::FpFormat::binary64());

/// Values of the mode-agnostic semantics: the refined values plus `rnd v` and
/// `let-bind(rnd v, x. f)`.
bool is_agnostic_value(const Term& t);

/// One reduction of the mode-agnostic semantics, where rounding never fires
/// and nested binds reassociate. Returns null on values.
TermPtr step_agnostic(const TermPtr& e, const GlobalEnv& globals);

/// e[v/x] for a closed v.
TermPtr substitute(const TermPtr& e, const std::string& x, const TermPtr& v);

/// Iterates `step` to a value.
TermPtr normalize(const TermPtr& e, Mode mode, const GlobalEnv& globals,
                  const numerics::FpFormat& fmt = numerics::FpFormat::binary64(),
                  std::uint64_t fuel = kDefaultFuel);

struct Function;

/// Runtime values of the machine.
class Value {
 public:
  enum class Kind { Unit, Num, WithPair, TensorPair, Inl, Inr, Box, Ret, Closure, Err };

  Value() = default;
  static Value unit() { return Value(); }
  static Value num(numerics::Real k);
  static Value err();
  static Value with_pair(Value a, Value b);
  static Value tensor_pair(Value a, Value b);
  static Value inl(Value a);
  static Value inr(Value a);
  static Value box(Value a);
  static Value ret(Value a);

  Kind kind() const { return kind_; }
  bool is(Kind k) const { return kind_ == k; }
  /// Precondition: kind() == Num.
  const numerics::Real& number() const { return *num_; }
  /// Components of pairs, the payload of inl/inr/box/ret.
  const Value& first() const;
  const Value& second() const;

  /// Closed term for the value; closures are not supported.
  TermPtr to_term() const;
  std::string to_string() const;

 private:
  friend class Machine;
  struct Node;
  static Value make(Kind k, Value a, Value b);
  Kind kind_ = Kind::Unit;
  std::optional<numerics::Real> num_;
  std::shared_ptr<const Node> node_;
};

/// Compiles closed terms and the declarations of a GlobalEnv into a slot-based
/// environment machine. Agrees with iterating `step`, much faster.
class Machine {
 public:
  explicit Machine(const GlobalEnv& globals,
                   const numerics::FpFormat& fmt = numerics::FpFormat::binary64());
  ~Machine();
  Machine(const Machine&) = delete;
  Machine& operator=(const Machine&) = delete;

  Value run(const Term& closed, Mode mode, std::uint64_t fuel = kDefaultFuel);
  /// Applies a global declaration to argument values.
  Value call(const std::string& name, const std::vector<Value>& args, Mode mode,
             std::uint64_t fuel = kDefaultFuel);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Evaluates `d` applied to closed argument terms. Monadic parameters are
/// passed as `rnd c` and box parameters as `[c {s}]`; arguments are evaluated
/// first, as in an application.
Value eval(const Decl& d, const GlobalEnv& globals, const std::vector<TermPtr>& args, Mode mode,
           const numerics::FpFormat& fmt = numerics::FpFormat::binary64());

enum class Verdict { Certified, Violation, Inconclusive };

const char* to_string(Verdict v);

struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  /// Approximate RP distance, for reporting only.
  double distance = 0;
  /// Working precision that settled the verdict; 0 for the exact fast path.
  int bits = 0;
};

/// Decides d(ideal, fp) <= bound for two positive numerals, raising the
/// working precision from 128 bits up to `max_bits`.
Certificate certify_rp(const numerics::Real& ideal, const numerics::Real& fp, const Grade& bound,
                       int max_bits = 4096);

}  // namespace numfuzz::eval
