#pragma once

#include <memory>
#include <string>
#include <unordered_set>

#include "numfuzz/core/type.hpp"
#include "numfuzz/numerics/real.hpp"

namespace numfuzz {

/// 1-based line and column; line 0 marks a synthesized node.
struct Span {
  int line = 0;
  int column = 0;
  int length = 0;
};

enum class PrimOp { Add, Mul, Div, Sqrt, Lt };

const char* to_string(PrimOp op);

enum class TermKind {
  Var,
  Unit,
  Const,
  WithPair,
  TensorPair,
  Inl,
  Inr,
  Lam,
  Box,
  Rnd,
  Ret,
  Bind,  // let-bind(a, x.b)
  Let,   // let x = a in b
  Proj1,
  Proj2,
  TensorLet,  // let (x, y) = a in b
  BoxLet,     // let [x] = a in b
  Case,       // case a of (x.b | y.c)
  Op,
  App,
  Err,
};

class Term;
using TermPtr = std::shared_ptr<const Term>;

/// Immutable term node. Which fields are meaningful depends on the kind:
///
///   Var            x
///   Const          num
///   Inl, Inr       a, ty (the other summand), annotated
///   Lam            x, ty, a (body)
///   Box            a, grade
///   Bind, Let, BoxLet      x, a, b
///   TensorLet      x, y, a, b
///   Case           a, x, b, y, c
///   Op             op, a
///   pairs, App     a, b
///   Rnd, Ret, Proj1, Proj2 a
class Term {
 public:
  TermKind kind = TermKind::Unit;
  Span span;
  std::string x, y;
  Ty ty;
  bool annotated = false;
  Grade grade;
  numerics::Real num;
  PrimOp op = PrimOp::Add;
  TermPtr a, b, c;

  bool is(TermKind k) const { return kind == k; }
};

/// Structural equality, ignoring spans.
bool term_equal(const Term& s, const Term& t);

/// Free variables of t.
std::unordered_set<std::string> free_vars(const Term& t);
bool occurs_free(const std::string& x, const Term& t);

/// True for the value forms of the refined (ideal / fp) semantics: rnd is
/// never a value there.
bool is_value(const Term& t);

namespace term {

TermPtr var(std::string x, Span s = {});
TermPtr unit(Span s = {});
TermPtr constant(numerics::Real k, Span s = {});
TermPtr with_pair(TermPtr a, TermPtr b, Span s = {});
TermPtr tensor_pair(TermPtr a, TermPtr b, Span s = {});
/// `other` is the summand not inhabited; `annotated` records whether the
/// source spelled it out.
TermPtr inl(TermPtr a, Ty other, bool annotated = false, Span s = {});
TermPtr inr(TermPtr a, Ty other, bool annotated = false, Span s = {});
TermPtr lam(std::string x, Ty ty, TermPtr body, Span s = {});
TermPtr box(TermPtr a, Grade g, Span s = {});
TermPtr rnd(TermPtr a, Span s = {});
TermPtr ret(TermPtr a, Span s = {});
TermPtr bind(std::string x, TermPtr a, TermPtr body, Span s = {});
TermPtr let(std::string x, TermPtr a, TermPtr body, Span s = {});
TermPtr proj(int i, TermPtr a, Span s = {});
TermPtr tensor_let(std::string x, std::string y, TermPtr a, TermPtr body, Span s = {});
TermPtr box_let(std::string x, TermPtr a, TermPtr body, Span s = {});
TermPtr case_of(TermPtr a, std::string x, TermPtr left, std::string y, TermPtr right, Span s = {});
TermPtr op(PrimOp op, TermPtr a, Span s = {});
TermPtr app(TermPtr f, TermPtr a, Span s = {});
TermPtr err(Span s = {});

}  // namespace term

}  // namespace numfuzz
