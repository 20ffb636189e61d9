#include "numfuzz/eval/eval.hpp"

#include "numfuzz/syntax/pretty.hpp"

namespace numfuzz::eval {

using numerics::Real;

const char* to_string(Mode m) {
  switch (m) {
    case Mode::Ideal: return "ideal";
    case Mode::Fp: return "fp";
    case Mode::FpExceptional: return "fp-exceptional";
  }
  return "?";
}

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "ideal") return Mode::Ideal;
  if (text == "fp") return Mode::Fp;
  if (text == "fp-exceptional" || text == "fp_exceptional") return Mode::FpExceptional;
  return std::nullopt;
}

NonRepresentable::NonRepresentable(numerics::ExceptionalReason reason)
    : std::runtime_error(std::string("rounding ") + numerics::to_string(reason) +
                         ": the result is not a normal floating-point value"),
      reason_(reason) {}

namespace {

TermPtr with_children(const Term& t, TermPtr a, TermPtr b, TermPtr c) {
  if (a == t.a && b == t.b && c == t.c) return nullptr;
  auto n = std::make_shared<Term>(t);
  n->a = std::move(a);
  n->b = std::move(b);
  n->c = std::move(c);
  return n;
}

TermPtr subst(const TermPtr& e, const std::string& x, const TermPtr& v) {
  const Term& t = *e;
  auto go = [&](const TermPtr& s) { return s ? subst(s, x, v) : s; };
  TermPtr a = t.a, b = t.b, c = t.c;
  switch (t.kind) {
    case TermKind::Var: return t.x == x ? v : e;
    case TermKind::Unit:
    case TermKind::Const:
    case TermKind::Err: return e;
    case TermKind::Lam:
      if (t.x != x) a = go(a);
      break;
    case TermKind::Bind:
    case TermKind::Let:
    case TermKind::BoxLet:
      a = go(a);
      if (t.x != x) b = go(b);
      break;
    case TermKind::TensorLet:
      a = go(a);
      if (t.x != x && t.y != x) b = go(b);
      break;
    case TermKind::Case:
      a = go(a);
      if (t.x != x) b = go(b);
      if (t.y != x) c = go(c);
      break;
    default:
      a = go(a);
      b = go(b);
      c = go(c);
  }
  TermPtr n = with_children(t, a, b, c);
  return n ? n : e;
}

[[noreturn]] void stuck(const Term& t) { throw Stuck("no reduction applies to " + pretty(t)); }

TermPtr rebuild_a(const Term& t, TermPtr a) { return with_children(t, std::move(a), t.b, t.c); }
TermPtr rebuild_b(const Term& t, TermPtr b) { return with_children(t, t.a, std::move(b), t.c); }

TermPtr global_definition(const Term& t, const GlobalEnv& globals) {
  if (const Decl* d = globals.decl(t.x)) return d->as_lambda();
  stuck(t);
}

const Real& numeral(const Term& t) {
  if (!t.is(TermKind::Const)) stuck(t);
  return t.num;
}

TermPtr apply_op(const Term& t, const Term& arg) {
  switch (t.op) {
    case PrimOp::Add:
      if (!arg.is(TermKind::WithPair)) stuck(t);
      return term::constant(numeral(*arg.a) + numeral(*arg.b));
    case PrimOp::Mul:
    case PrimOp::Div: {
      if (!arg.is(TermKind::TensorPair)) stuck(t);
      const Real& x = numeral(*arg.a);
      const Real& y = numeral(*arg.b);
      return term::constant(t.op == PrimOp::Mul ? x * y : x / y);
    }
    case PrimOp::Sqrt:
      if (!arg.is(TermKind::Box)) stuck(t);
      return term::constant(sqrt(numeral(*arg.a)));
    case PrimOp::Lt: {
      if (!arg.is(TermKind::Box) || !arg.a->is(TermKind::WithPair)) stuck(t);
      bool less = Real::less(numeral(*arg.a->a), numeral(*arg.a->b));
      return less ? term::inl(term::unit(), Ty::unit()) : term::inr(term::unit(), Ty::unit());
    }
  }
  stuck(t);
}

TermPtr round_numeral(const Real& k, Mode mode, const numerics::FpFormat& fmt) {
  if (mode == Mode::Ideal) return term::ret(term::constant(k));
  numerics::RoundResult r = k.round_up(fmt);
  if (r.is_exceptional()) {
    if (mode == Mode::Fp) throw NonRepresentable(r.reason());
    return term::err();
  }
  return term::ret(term::constant(Real(r.value())));
}

// Shared by both semantics; `value` decides what counts as a value and `next`
// is the recursive step for congruences.
template <typename IsValue, typename Next, typename Monadic>
TermPtr step_with(const TermPtr& e, const GlobalEnv& globals, IsValue value, Next next, Monadic monadic) {
  const Term& t = *e;
  if (value(t)) return nullptr;
  switch (t.kind) {
    case TermKind::Var: return global_definition(t, globals);
    case TermKind::WithPair:
    case TermKind::TensorPair:
      if (!value(*t.a)) return rebuild_a(t, next(t.a));
      return rebuild_b(t, next(t.b));
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::Box:
    case TermKind::Ret:
    case TermKind::Rnd: return value(*t.a) ? monadic(e) : rebuild_a(t, next(t.a));
    case TermKind::Bind: return monadic(e);
    case TermKind::Let:
      if (!value(*t.a)) return rebuild_a(t, next(t.a));
      return subst(t.b, t.x, t.a);
    case TermKind::Proj1:
    case TermKind::Proj2:
      if (!value(*t.a)) return rebuild_a(t, next(t.a));
      if (!t.a->is(TermKind::WithPair)) stuck(t);
      return t.is(TermKind::Proj1) ? t.a->a : t.a->b;
    case TermKind::TensorLet:
      if (!value(*t.a)) return rebuild_a(t, next(t.a));
      if (!t.a->is(TermKind::TensorPair)) stuck(t);
      return subst(subst(t.b, t.x, t.a->a), t.y, t.a->b);
    case TermKind::BoxLet:
      if (!value(*t.a)) return rebuild_a(t, next(t.a));
      if (!t.a->is(TermKind::Box)) stuck(t);
      return subst(t.b, t.x, t.a->a);
    case TermKind::Case:
      if (!value(*t.a)) return rebuild_a(t, next(t.a));
      if (t.a->is(TermKind::Inl)) return subst(t.b, t.x, t.a->a);
      if (t.a->is(TermKind::Inr)) return subst(t.c, t.y, t.a->a);
      stuck(t);
    case TermKind::Op:
      if (!value(*t.a)) return rebuild_a(t, next(t.a));
      return apply_op(t, *t.a);
    case TermKind::App:
      if (!value(*t.a)) return rebuild_a(t, next(t.a));
      if (!value(*t.b)) return rebuild_b(t, next(t.b));
      if (!t.a->is(TermKind::Lam)) stuck(t);
      return subst(t.a->a, t.a->x, t.b);
    default: stuck(t);
  }
}

std::string fresh_name(const std::string& base, const Term& avoid) {
  for (int i = 0;; ++i) {
    std::string n = base + "#" + std::to_string(i);
    if (!occurs_free(n, avoid)) return n;
  }
}

}  // namespace

TermPtr substitute(const TermPtr& e, const std::string& x, const TermPtr& v) { return subst(e, x, v); }

TermPtr step(const TermPtr& e, Mode mode, const GlobalEnv& globals, const numerics::FpFormat& fmt) {
  auto value = [](const Term& t) { return is_value(t); };
  auto next = [&](const TermPtr& s) { return step(s, mode, globals, fmt); };
  auto monadic = [&](const TermPtr& s) -> TermPtr {
    const Term& t = *s;
    switch (t.kind) {
      case TermKind::Rnd: return round_numeral(numeral(*t.a), mode, fmt);
      case TermKind::Bind:
        if (t.a->is(TermKind::Ret) && is_value(*t.a)) return subst(t.b, t.x, t.a->a);
        if (t.a->is(TermKind::Err)) return term::err();
        if (!is_value(*t.a)) return rebuild_a(t, step(t.a, mode, globals, fmt));
        stuck(t);
      default: stuck(t);
    }
  };
  return step_with(e, globals, value, next, monadic);
}

bool is_agnostic_value(const Term& t) {
  switch (t.kind) {
    case TermKind::Rnd: return is_agnostic_value(*t.a) && t.a->is(TermKind::Const);
    case TermKind::Bind: return t.a->is(TermKind::Rnd) && is_agnostic_value(*t.a);
    case TermKind::WithPair:
    case TermKind::TensorPair: return is_agnostic_value(*t.a) && is_agnostic_value(*t.b);
    case TermKind::Inl:
    case TermKind::Inr:
    case TermKind::Box:
    case TermKind::Ret: return is_agnostic_value(*t.a);
    case TermKind::Err: return false;
    default: return is_value(t);
  }
}

TermPtr step_agnostic(const TermPtr& e, const GlobalEnv& globals) {
  auto value = [](const Term& t) { return is_agnostic_value(t); };
  auto next = [&](const TermPtr& s) { return step_agnostic(s, globals); };
  auto monadic = [&](const TermPtr& s) -> TermPtr {
    const Term& t = *s;
    if (!t.is(TermKind::Bind)) stuck(t);
    const Term& first = *t.a;
    if (first.is(TermKind::Ret) && is_agnostic_value(first)) return subst(t.b, t.x, first.a);
    if (first.is(TermKind::Bind) && is_agnostic_value(*first.a)) {
      // let-bind(let-bind(v, x. f), y. g) -> let-bind(v, x. let-bind(f, y. g))
      std::string x = first.x;
      TermPtr f = first.b;
      if (occurs_free(x, *t.b) || x == t.x) {
        std::string fresh = fresh_name(x, *term::tensor_pair(t.b, f));
        f = subst(f, x, term::var(fresh));
        x = fresh;
      }
      return term::bind(x, first.a, term::bind(t.x, f, t.b, t.span), first.span);
    }
    if (!is_agnostic_value(first)) return rebuild_a(t, step_agnostic(t.a, globals));
    stuck(t);
  };
  return step_with(e, globals, value, next, monadic);
}

TermPtr normalize(const TermPtr& e, Mode mode, const GlobalEnv& globals, const numerics::FpFormat& fmt,
                  std::uint64_t fuel) {
  TermPtr cur = e;
  for (std::uint64_t i = 0; i < fuel; ++i) {
    TermPtr n = step(cur, mode, globals, fmt);
    if (!n) return cur;
    cur = std::move(n);
  }
  throw FuelExhausted();
}

}  // namespace numfuzz::eval
