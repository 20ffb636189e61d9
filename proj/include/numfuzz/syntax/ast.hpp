#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "numfuzz/core/term.hpp"
#include "numfuzz/numerics/format.hpp"

namespace numfuzz {

struct Param {
  std::string name;
  Ty ty;
  Span span;
};

struct Decl {
  std::string name;
  std::vector<Param> params;
  Ty result;
  TermPtr body;
  Span span;

  /// The body wrapped in one annotated lambda per parameter.
  TermPtr as_lambda() const;
  /// The curried function type of the declaration as written.
  Ty declared_type() const;
};

struct SourceProgram {
  std::vector<Decl> decls;
  std::string text;

  const Decl* find(const std::string& name) const;
};

/// Grade expressions: decimal literals, eps, inf, sums and products.
struct GradeExpr {
  enum class Kind { Literal, Eps, Inf, Sum, Product };
  Kind kind = Kind::Literal;
  Rational literal{0};
  std::vector<GradeExpr> operands;
};

/// eps is the unit roundoff 2^(1-p) of `fmt`.
Grade eval_grade_expr(const GradeExpr& g, const numerics::FpFormat& fmt);

enum class Severity { Error, Warning };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  Span span;

  /// "line:col: error: message"
  std::string render() const;
  /// render() followed by the offending source line and a caret marker.
  std::string render(const std::string& source) const;
};

/// Lexical or syntactic failure; parsing stops at the first error.
class ParseError : public std::runtime_error {
 public:
  explicit ParseError(std::vector<Diagnostic> diagnostics);
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  std::vector<Diagnostic> diagnostics_;
};

}  // namespace numfuzz
