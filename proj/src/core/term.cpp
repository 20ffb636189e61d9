#include "numfuzz/core/term.hpp"

namespace numfuzz {

const char* to_string(PrimOp op) {
  switch (op) {
    case PrimOp::Add: return "add";
    case PrimOp::Mul: return "mul";
    case PrimOp::Div: return "div";
    case PrimOp::Sqrt: return "sqrt";
    case PrimOp::Lt: return "lt";
  }
  return "?";
}

namespace {

bool same(const TermPtr& s, const TermPtr& t) {
  if (s == t) return true;
  if (!s || !t) return false;
  return term_equal(*s, *t);
}

void collect_free(const Term& t, std::unordered_set<std::string>& bound,
                  std::unordered_set<std::string>& out) {
  auto under = [&](const std::string& name, const TermPtr& body) {
    bool fresh = bound.insert(name).second;
    collect_free(*body, bound, out);
    if (fresh) bound.erase(name);
  };
  switch (t.kind) {
    case TermKind::Var:
      if (!bound.count(t.x)) out.insert(t.x);
      return;
    case TermKind::Unit:
    case TermKind::Const:
    case TermKind::Err: return;
    case TermKind::Lam: under(t.x, t.a); return;
    case TermKind::Bind:
    case TermKind::Let:
    case TermKind::BoxLet:
      collect_free(*t.a, bound, out);
      under(t.x, t.b);
      return;
    case TermKind::TensorLet: {
      collect_free(*t.a, bound, out);
      bool fx = bound.insert(t.x).second;
      bool fy = bound.insert(t.y).second;
      collect_free(*t.b, bound, out);
      if (fx) bound.erase(t.x);
      if (fy) bound.erase(t.y);
      return;
    }
    case TermKind::Case:
      collect_free(*t.a, bound, out);
      under(t.x, t.b);
      under(t.y, t.c);
      return;
    default:
      if (t.a) collect_free(*t.a, bound, out);
      if (t.b) collect_free(*t.b, bound, out);
      return;
  }
}

}  // namespace

bool term_equal(const Term& s, const Term& t) {
  if (&s == &t) return true;
  if (s.kind != t.kind) return false;
  switch (s.kind) {
    case TermKind::Var: return s.x == t.x;
    case TermKind::Unit:
    case TermKind::Err: return true;
    case TermKind::Const: return s.num == t.num;
    case TermKind::Inl:
    case TermKind::Inr: return s.ty == t.ty && s.annotated == t.annotated && same(s.a, t.a);
    case TermKind::Lam: return s.x == t.x && s.ty == t.ty && same(s.a, t.a);
    case TermKind::Box: return s.grade == t.grade && same(s.a, t.a);
    case TermKind::Op: return s.op == t.op && same(s.a, t.a);
    case TermKind::Bind:
    case TermKind::Let:
    case TermKind::BoxLet: return s.x == t.x && same(s.a, t.a) && same(s.b, t.b);
    case TermKind::TensorLet: return s.x == t.x && s.y == t.y && same(s.a, t.a) && same(s.b, t.b);
    case TermKind::Case:
      return s.x == t.x && s.y == t.y && same(s.a, t.a) && same(s.b, t.b) && same(s.c, t.c);
    default: return same(s.a, t.a) && same(s.b, t.b);
  }
}

std::unordered_set<std::string> free_vars(const Term& t) {
  std::unordered_set<std::string> bound, out;
  collect_free(t, bound, out);
  return out;
}

bool occurs_free(const std::string& x, const Term& t) { return free_vars(t).count(x) != 0; }

bool is_value(const Term& t) {
  switch (t.kind) {
    case TermKind::Unit:
    case TermKind::Const:
    case TermKind::Lam:
    case TermKind::Err: return true;
    case TermKind::WithPair:
    case TermKind::TensorPair: return is_value(*t.a) && is_value(*t.b);
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::Box:
    case TermKind::Ret: return is_value(*t.a);
    default: return false;
  }
}

namespace term {

namespace {

std::shared_ptr<Term> make(TermKind k, Span s) {
  auto t = std::make_shared<Term>();
  t->kind = k;
  t->span = s;
  return t;
}

}  // namespace

TermPtr var(std::string x, Span s) {
  auto t = make(TermKind::Var, s);
  t->x = std::move(x);
  return t;
}

TermPtr unit(Span s) { return make(TermKind::Unit, s); }

TermPtr constant(numerics::Real k, Span s) {
  auto t = make(TermKind::Const, s);
  t->num = std::move(k);
  return t;
}

TermPtr with_pair(TermPtr a, TermPtr b, Span s) {
  auto t = make(TermKind::WithPair, s);
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}

TermPtr tensor_pair(TermPtr a, TermPtr b, Span s) {
  auto t = make(TermKind::TensorPair, s);
  t->a = std::move(a);
  t->b = std::move(b);
  return t;
}

TermPtr inl(TermPtr a, Ty other, bool annotated, Span s) {
  auto t = make(TermKind::Inl, s);
  t->a = std::move(a);
  t->ty = std::move(other);
  t->annotated = annotated;
  return t;
}

TermPtr inr(TermPtr a, Ty other, bool annotated, Span s) {
  auto t = make(TermKind::Inr, s);
  t->a = std::move(a);
  t->ty = std::move(other);
  t->annotated = annotated;
  return t;
}

TermPtr lam(std::string x, Ty ty, TermPtr body, Span s) {
  auto t = make(TermKind::Lam, s);
  t->x = std::move(x);
  t->ty = std::move(ty);
  t->a = std::move(body);
  return t;
}

TermPtr box(TermPtr a, Grade g, Span s) {
  auto t = make(TermKind::Box, s);
  t->a = std::move(a);
  t->grade = std::move(g);
  return t;
}

TermPtr rnd(TermPtr a, Span s) {
  auto t = make(TermKind::Rnd, s);
  t->a = std::move(a);
  return t;
}

TermPtr ret(TermPtr a, Span s) {
  auto t = make(TermKind::Ret, s);
  t->a = std::move(a);
  return t;
}

namespace {

TermPtr binder(TermKind k, std::string x, TermPtr a, TermPtr body, Span s) {
  auto t = make(k, s);
  t->x = std::move(x);
  t->a = std::move(a);
  t->b = std::move(body);
  return t;
}

}  // namespace

TermPtr bind(std::string x, TermPtr a, TermPtr body, Span s) {
  return binder(TermKind::Bind, std::move(x), std::move(a), std::move(body), s);
}

TermPtr let(std::string x, TermPtr a, TermPtr body, Span s) {
  return binder(TermKind::Let, std::move(x), std::move(a), std::move(body), s);
}

TermPtr box_let(std::string x, TermPtr a, TermPtr body, Span s) {
  return binder(TermKind::BoxLet, std::move(x), std::move(a), std::move(body), s);
}

TermPtr proj(int i, TermPtr a, Span s) {
  auto t = make(i == 1 ? TermKind::Proj1 : TermKind::Proj2, s);
  t->a = std::move(a);
  return t;
}

TermPtr tensor_let(std::string x, std::string y, TermPtr a, TermPtr body, Span s) {
  auto t = make(TermKind::TensorLet, s);
  t->x = std::move(x);
  t->y = std::move(y);
  t->a = std::move(a);
  t->b = std::move(body);
  return t;
}

TermPtr case_of(TermPtr a, std::string x, TermPtr left, std::string y, TermPtr right, Span s) {
  auto t = make(TermKind::Case, s);
  t->a = std::move(a);
  t->x = std::move(x);
  t->b = std::move(left);
  t->y = std::move(y);
  t->c = std::move(right);
  return t;
}

TermPtr op(PrimOp o, TermPtr a, Span s) {
  auto t = make(TermKind::Op, s);
  t->op = o;
  t->a = std::move(a);
  return t;
}

TermPtr app(TermPtr f, TermPtr a, Span s) {
  auto t = make(TermKind::App, s);
  t->a = std::move(f);
  t->b = std::move(a);
  return t;
}

TermPtr err(Span s) { return make(TermKind::Err, s); }

}  // namespace term

}  // namespace numfuzz
