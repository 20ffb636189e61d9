#include "numfuzz/syntax/pretty.hpp"

#include "numfuzz/numerics/rational.hpp"

namespace numfuzz {

namespace {

constexpr int kShortDigits = 12;
constexpr int kLongDigits = 2000;

// Precedence levels for types: 0 = lolli, 1 = sum, 2 = prim.
std::string type_at(const Ty& t, int level, const numerics::FpFormat& fmt) {
  auto wrap = [&](int own, std::string s) { return own < level ? "(" + s + ")" : s; };
  switch (t.kind()) {
    case TyKind::Unit: return "unit";
    case TyKind::Num: return "num";
    case TyKind::Tensor: return "(" + type_at(t.lhs(), 0, fmt) + ", " + type_at(t.rhs(), 0, fmt) + ")";
    case TyKind::With: return "(|" + type_at(t.lhs(), 0, fmt) + ", " + type_at(t.rhs(), 0, fmt) + "|)";
    case TyKind::Sum: return wrap(1, type_at(t.lhs(), 1, fmt) + " + " + type_at(t.rhs(), 2, fmt));
    case TyKind::Lolli: return wrap(0, type_at(t.lhs(), 1, fmt) + " -o " + type_at(t.rhs(), 0, fmt));
    case TyKind::Bang: return "![" + pretty(t.grade(), fmt) + "]" + type_at(t.inner(), 2, fmt);
    case TyKind::Monad: return "M[" + pretty(t.grade(), fmt) + "]" + type_at(t.inner(), 2, fmt);
  }
  return "?";
}

std::string number(const numerics::Real& k) {
  if (k.is_exact()) {
    if (auto d = numerics::to_exact_decimal(k.exact(), kLongDigits)) return *d;
  }
  return k.to_decimal(17);
}

class TermPrinter {
 public:
  explicit TermPrinter(const numerics::FpFormat& fmt) : fmt_(fmt) {}

  static bool is_statement(const Term& t) {
    return t.is(TermKind::Let) || t.is(TermKind::Bind) || t.is(TermKind::BoxLet) || t.is(TermKind::TensorLet);
  }

  std::string block(const Term& t) {
    std::string out;
    const Term* cur = &t;
    while (is_statement(*cur)) {
      out += statement(*cur) + " ";
      cur = cur->b.get();
    }
    return out + expr(*cur);
  }

  std::string statement(const Term& t) {
    switch (t.kind) {
      case TermKind::Let: return t.x + " = " + expr(*t.a) + ";";
      case TermKind::Bind: return "let " + t.x + " = " + expr(*t.a) + ";";
      case TermKind::BoxLet: return "let [" + t.x + "] = " + expr(*t.a) + ";";
      default: return "let (" + t.x + ", " + t.y + ") = " + expr(*t.a) + ";";
    }
  }

  std::string expr(const Term& t) {
    switch (t.kind) {
      case TermKind::Rnd: return "rnd " + expr(*t.a);
      case TermKind::Ret: return "ret " + expr(*t.a);
      case TermKind::Proj1: return "pi1 " + expr(*t.a);
      case TermKind::Proj2: return "pi2 " + expr(*t.a);
      case TermKind::Op: return std::string(to_string(t.op)) + " " + expr(*t.a);
      case TermKind::Inl:
      case TermKind::Inr: {
        std::string head = t.is(TermKind::Inl) ? "inl" : "inr";
        if (t.annotated) head += "{" + pretty(t.ty, fmt_) + "}";
        return head + " " + expr(*t.a);
      }
      case TermKind::Case:
        return "case " + expr(*t.a) + " of { inl " + t.x + " . " + block(*t.b) + " | inr " + t.y + " . " +
               block(*t.c) + " }";
      case TermKind::Lam: return "fun (" + t.x + ": " + pretty(t.ty, fmt_) + ") { " + block(*t.a) + " }";
      case TermKind::App: return spine(t);
      default:
        if (is_statement(t)) return "(" + block(t) + ")";
        return atom(t);
    }
  }

  std::string spine(const Term& t) {
    if (t.is(TermKind::App)) return spine(*t.a) + " " + atom(*t.b);
    return atom(t);
  }

  std::string atom(const Term& t) {
    switch (t.kind) {
      case TermKind::Var: return t.x;
      case TermKind::Unit: return "()";
      case TermKind::Err: return "err";
      case TermKind::Const: return number(t.num);
      case TermKind::WithPair: return "(|" + expr(*t.a) + ", " + expr(*t.b) + "|)";
      case TermKind::TensorPair: return "(" + expr(*t.a) + ", " + expr(*t.b) + ")";
      case TermKind::Box: return "[" + expr(*t.a) + " {" + pretty(t.grade, fmt_) + "}]";
      default: return "(" + (is_statement(t) ? block(t) : expr(t)) + ")";
    }
  }

  // Multi-line block for declarations.
  std::string lines(const Term& t, const std::string& indent) {
    std::string out;
    const Term* cur = &t;
    while (is_statement(*cur)) {
      out += indent + statement(*cur) + "\n";
      cur = cur->b.get();
    }
    return out + indent + expr(*cur) + "\n";
  }

 private:
  numerics::FpFormat fmt_;
};

}  // namespace

std::string pretty(const Grade& g, const numerics::FpFormat& fmt) {
  if (g.is_infinite()) return "inf";
  const Rational& v = g.value();
  if (auto d = numerics::to_exact_decimal(v, kShortDigits)) return *d;
  Rational q = v / numerics::unit_roundoff(fmt).value();
  if (q == 1) return "eps";
  if (auto d = numerics::to_exact_decimal(q, kShortDigits)) return *d + "*eps";
  if (auto d = numerics::to_exact_decimal(v, kLongDigits)) return *d;
  return numerics::to_scientific(v, 3);
}

std::string pretty(const Ty& t, const numerics::FpFormat& fmt) { return type_at(t, 0, fmt); }

std::string pretty(const Term& t, const numerics::FpFormat& fmt) { return TermPrinter(fmt).block(t); }

std::string pretty(const Decl& d, const numerics::FpFormat& fmt) {
  std::string out = "function " + d.name;
  for (const auto& p : d.params) out += " (" + p.name + ": " + pretty(p.ty, fmt) + ")";
  out += " : " + pretty(d.result, fmt) + " {\n";
  out += TermPrinter(fmt).lines(*d.body, "  ");
  return out + "}\n";
}

std::string pretty(const SourceProgram& p, const numerics::FpFormat& fmt) {
  std::string out;
  for (std::size_t i = 0; i < p.decls.size(); ++i) {
    if (i) out += "\n";
    out += pretty(p.decls[i], fmt);
  }
  return out;
}

}  // namespace numfuzz
