#include "numfuzz/syntax/ast.hpp"

#include <sstream>

namespace numfuzz {

TermPtr Decl::as_lambda() const {
  TermPtr t = body;
  for (auto it = params.rbegin(); it != params.rend(); ++it) t = term::lam(it->name, it->ty, t, it->span);
  return t;
}

Ty Decl::declared_type() const {
  Ty t = result;
  for (auto it = params.rbegin(); it != params.rend(); ++it) t = Ty::lolli(it->ty, t);
  return t;
}

const Decl* SourceProgram::find(const std::string& name) const {
  for (const auto& d : decls)
    if (d.name == name) return &d;
  return nullptr;
}

Grade eval_grade_expr(const GradeExpr& g, const numerics::FpFormat& fmt) {
  switch (g.kind) {
    case GradeExpr::Kind::Literal: return Grade(g.literal);
    case GradeExpr::Kind::Eps: return numerics::unit_roundoff(fmt);
    case GradeExpr::Kind::Inf: return Grade::infinity();
    case GradeExpr::Kind::Sum: {
      Grade acc;
      for (const auto& o : g.operands) acc += eval_grade_expr(o, fmt);
      return acc;
    }
    case GradeExpr::Kind::Product: {
      Grade acc = Grade::one();
      for (const auto& o : g.operands) acc *= eval_grade_expr(o, fmt);
      return acc;
    }
  }
  return Grade();
}

std::string Diagnostic::render() const {
  std::ostringstream out;
  out << span.line << ':' << span.column << ": " << (severity == Severity::Error ? "error" : "warning")
      << ": " << message;
  return out.str();
}

std::string Diagnostic::render(const std::string& source) const {
  std::string out = render();
  if (span.line <= 0) return out;
  std::istringstream in(source);
  std::string line;
  for (int i = 0; i < span.line && std::getline(in, line); ++i) {
  }
  out += "\n  " + line + "\n  ";
  out += std::string(span.column > 0 ? span.column - 1 : 0, ' ');
  out += std::string(span.length > 0 ? span.length : 1, '^');
  return out;
}

namespace {

std::string first_message(const std::vector<Diagnostic>& ds) {
  return ds.empty() ? "parse error" : ds.front().render();
}

}  // namespace

ParseError::ParseError(std::vector<Diagnostic> diagnostics)
    : std::runtime_error(first_message(diagnostics)), diagnostics_(std::move(diagnostics)) {}

}  // namespace numfuzz
