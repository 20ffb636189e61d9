#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "numfuzz/core/context.hpp"
#include "numfuzz/core/term.hpp"
#include "numfuzz/syntax/ast.hpp"

namespace numfuzz {

/// Types of the built-in primitives.
///
///   add  : (|num, num|) -o num
///   mul  : (num, num) -o num
///   div  : (num, num) -o num
///   sqrt : ![0.5]num -o num
///   lt   : ![inf](|num, num|) -o unit + unit
class Signature {
 public:
  static const Signature& standard();
  const Ty& type_of(PrimOp op) const;

 private:
  Signature();
  std::unordered_map<int, Ty> types_;
};

/// Variable types without sensitivities, in binding order.
using Skeleton = std::vector<std::pair<std::string, Ty>>;

struct InferResult {
  TypingContext context;
  Ty ty;
};

enum class TypeErrorKind { NotSummable, NotSubtype, Incompatible, ArgTooSensitive, UnboundVariable, ShapeMismatch };

const char* to_string(TypeErrorKind k);

class TypeError : public std::runtime_error {
 public:
  TypeError(TypeErrorKind kind, Span span, std::string message, std::string expected = {},
            std::string actual = {});
  TypeErrorKind kind() const { return kind_; }
  const Span& span() const { return span_; }
  const std::string& expected() const { return expected_; }
  const std::string& actual() const { return actual_; }

 private:
  TypeErrorKind kind_;
  Span span_;
  std::string expected_;
  std::string actual_;
};

/// Checked top-level declarations, usable by later ones at their declared
/// types.
class GlobalEnv {
 public:
  void add(const Decl& d);
  /// Records a declaration that failed so references to it get a clear error.
  void add_failed(const std::string& name) { failed_.insert(name); }
  const Ty* type_of(const std::string& name) const;
  const Decl* decl(const std::string& name) const;
  bool failed(const std::string& name) const { return failed_.count(name) != 0; }
  const std::vector<std::string>& order() const { return order_; }

 private:
  std::unordered_map<std::string, Decl> decls_;
  std::unordered_map<std::string, Ty> types_;
  std::unordered_set<std::string> failed_;
  std::vector<std::string> order_;
};

/// Bottom-up sensitivity inference. The result context holds the minimal
/// sensitivity of every skeleton variable that occurs in e. Throws TypeError.
InferResult infer(const Skeleton& skel, const Term& e, const GlobalEnv& globals,
                  const numerics::FpFormat& fmt = numerics::FpFormat::binary64());

struct DeclCheck {
  std::string name;
  Ty declared;
  std::optional<Ty> inferred;
  /// Largest monadic grade in the inferred result type.
  Grade grade;
  std::optional<TypeError> error;

  bool ok() const { return !error.has_value(); }
};

/// Infers the declaration as nested lambdas and checks the result against the
/// declared type.
DeclCheck check_decl(const Decl& d, const GlobalEnv& globals,
                     const numerics::FpFormat& fmt = numerics::FpFormat::binary64());

/// Checks every declaration in order, adding the accepted ones to `globals`.
std::vector<DeclCheck> infer_program(const SourceProgram& p, GlobalEnv& globals,
                                     const numerics::FpFormat& fmt = numerics::FpFormat::binary64());

/// Result type after stripping `arity` function arrows.
Ty result_type(const Ty& fn, std::size_t arity);

/// Largest monadic grade appearing in a result type: M[r]s contributes r, pairs
/// and sums take the maximum, ! looks inside, everything else is 0.
Grade monadic_grade(const Ty& t);

}  // namespace numfuzz
