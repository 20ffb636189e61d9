#include "numfuzz/typing/infer.hpp"

#include "numfuzz/syntax/pretty.hpp"

namespace numfuzz {

Signature::Signature() {
  Ty num = Ty::num();
  types_.emplace(static_cast<int>(PrimOp::Add), Ty::lolli(Ty::with(num, num), num));
  types_.emplace(static_cast<int>(PrimOp::Mul), Ty::lolli(Ty::tensor(num, num), num));
  types_.emplace(static_cast<int>(PrimOp::Div), Ty::lolli(Ty::tensor(num, num), num));
  types_.emplace(static_cast<int>(PrimOp::Sqrt), Ty::lolli(Ty::bang(Grade(Rational(1, 2)), num), num));
  types_.emplace(static_cast<int>(PrimOp::Lt),
                 Ty::lolli(Ty::bang(Grade::infinity(), Ty::with(num, num)), Ty::sum(Ty::unit(), Ty::unit())));
}

const Signature& Signature::standard() {
  static const Signature s;
  return s;
}

const Ty& Signature::type_of(PrimOp op) const { return types_.at(static_cast<int>(op)); }

const char* to_string(TypeErrorKind k) {
  switch (k) {
    case TypeErrorKind::NotSummable: return "NotSummable";
    case TypeErrorKind::NotSubtype: return "NotSubtype";
    case TypeErrorKind::Incompatible: return "Incompatible";
    case TypeErrorKind::ArgTooSensitive: return "ArgTooSensitive";
    case TypeErrorKind::UnboundVariable: return "UnboundVariable";
    case TypeErrorKind::ShapeMismatch: return "ShapeMismatch";
  }
  return "?";
}

TypeError::TypeError(TypeErrorKind kind, Span span, std::string message, std::string expected, std::string actual)
    : std::runtime_error(std::move(message)),
      kind_(kind),
      span_(span),
      expected_(std::move(expected)),
      actual_(std::move(actual)) {}

void GlobalEnv::add(const Decl& d) {
  if (!decls_.count(d.name)) order_.push_back(d.name);
  types_.insert_or_assign(d.name, d.declared_type());
  decls_.insert_or_assign(d.name, d);
  failed_.erase(d.name);
}

const Ty* GlobalEnv::type_of(const std::string& name) const {
  auto it = types_.find(name);
  return it == types_.end() ? nullptr : &it->second;
}

const Decl* GlobalEnv::decl(const std::string& name) const {
  auto it = decls_.find(name);
  return it == decls_.end() ? nullptr : &it->second;
}

namespace {

class Inferrer {
 public:
  Inferrer(const GlobalEnv& globals, const numerics::FpFormat& fmt)
      : globals_(globals), fmt_(fmt), eps_(numerics::unit_roundoff(fmt)) {}

  void push(const std::string& x, const Ty& t) { scope_[x].push_back(t); }
  void pop(const std::string& x) {
    auto it = scope_.find(x);
    it->second.pop_back();
    if (it->second.empty()) scope_.erase(it);
  }

  InferResult run(const Term& t) {
    try {
      return go(t);
    } catch (const NotSummable& e) {
      throw TypeError(TypeErrorKind::NotSummable, t.span,
                      "variable " + e.var() + " is used at two different types", show(e.lhs()), show(e.rhs()));
    }
  }

 private:
  std::string show(const Ty& t) const { return pretty(t, fmt_); }

  [[noreturn]] void shape(const Term& t, const std::string& what, const Ty& actual) const {
    throw TypeError(TypeErrorKind::ShapeMismatch, t.span, "expected " + what + ", found " + show(actual), what,
                    show(actual));
  }

  void need_subtype(const Term& at, const Ty& actual, const Ty& expected, const std::string& what) const {
    if (!subtype(actual, expected))
      throw TypeError(TypeErrorKind::NotSubtype, at.span,
                      what + " has type " + show(actual) + ", which is not a subtype of " + show(expected),
                      show(expected), show(actual));
  }

  // Sensitivity of x in ctx, removing it.
  Grade take(TypingContext& ctx, const std::string& x) {
    Grade s = ctx.grade_of(x);
    ctx.erase(x);
    return s;
  }

  InferResult under(const std::string& x, const Ty& t, const Term& body) {
    push(x, t);
    InferResult r = go(body);
    pop(x);
    return r;
  }

  static Grade clamp(const Grade& s) { return s.is_zero() ? Grade::one() : s; }

  InferResult go(const Term& t) {
    switch (t.kind) {
      case TermKind::Var: {
        auto it = scope_.find(t.x);
        if (it != scope_.end()) return {TypingContext{{t.x, it->second.back(), Grade::one()}}, it->second.back()};
        if (const Ty* g = globals_.type_of(t.x)) return {TypingContext{}, *g};
        if (globals_.failed(t.x))
          throw TypeError(TypeErrorKind::UnboundVariable, t.span,
                          "declaration " + t.x + " did not type-check and cannot be used");
        throw TypeError(TypeErrorKind::UnboundVariable, t.span, "unbound variable " + t.x);
      }
      case TermKind::Unit: return {TypingContext{}, Ty::unit()};
      case TermKind::Const: return {TypingContext{}, Ty::num()};
      case TermKind::Err:
        throw TypeError(TypeErrorKind::ShapeMismatch, t.span, "err is a run-time value and has no static type");
      case TermKind::WithPair: {
        InferResult a = go(*t.a), b = go(*t.b);
        return {ctx_max(std::move(a.context), b.context), Ty::with(a.ty, b.ty)};
      }
      case TermKind::TensorPair: {
        InferResult a = go(*t.a), b = go(*t.b);
        return {ctx_sum(std::move(a.context), b.context), Ty::tensor(a.ty, b.ty)};
      }
      case TermKind::Inl: {
        InferResult a = go(*t.a);
        return {std::move(a.context), Ty::sum(a.ty, t.ty)};
      }
      case TermKind::Inr: {
        InferResult a = go(*t.a);
        return {std::move(a.context), Ty::sum(t.ty, a.ty)};
      }
      case TermKind::Proj1:
      case TermKind::Proj2: {
        InferResult a = go(*t.a);
        if (!a.ty.is(TyKind::With)) shape(*t.a, "a with-pair (|_, _|)", a.ty);
        return {std::move(a.context), t.is(TermKind::Proj1) ? a.ty.lhs() : a.ty.rhs()};
      }
      case TermKind::Lam: {
        InferResult body = under(t.x, t.ty, *t.a);
        Grade s = take(body.context, t.x);
        if (s > Grade::one())
          throw TypeError(TypeErrorKind::ArgTooSensitive, t.span,
                          "parameter " + t.x + " is used with sensitivity " + pretty(s, fmt_) +
                              " > 1; give it a type ![" + pretty(s, fmt_) + "]" + show(t.ty) +
                              " and unpack it with let [" + t.x + "'] = " + t.x + ";",
                          "1", pretty(s, fmt_));
        return {std::move(body.context), Ty::lolli(t.ty, body.ty)};
      }
      case TermKind::App: {
        InferResult f = go(*t.a);
        if (!f.ty.is(TyKind::Lolli)) shape(*t.a, "a function", f.ty);
        InferResult a = go(*t.b);
        need_subtype(*t.b, a.ty, f.ty.lhs(), "argument");
        return {ctx_sum(std::move(f.context), a.context), f.ty.rhs()};
      }
      case TermKind::Box: {
        InferResult a = go(*t.a);
        return {ctx_scale(t.grade, std::move(a.context)), Ty::bang(t.grade, a.ty)};
      }
      case TermKind::BoxLet: {
        InferResult a = go(*t.a);
        if (!a.ty.is(TyKind::Bang)) shape(*t.a, "a box ![_]_", a.ty);
        InferResult body = under(t.x, a.ty.inner(), *t.b);
        Grade sx = take(body.context, t.x);
        const Grade& s = a.ty.grade();
        Grade factor;
        if (sx.is_zero()) factor = Grade();
        else if (s.is_infinite()) factor = Grade::one();
        else if (s.is_zero() || sx.is_infinite()) factor = Grade::infinity();
        else factor = Grade(Rational(sx.value() / s.value()));
        return {ctx_sum(ctx_scale(factor, std::move(a.context)), body.context), body.ty};
      }
      case TermKind::Let: {
        InferResult a = go(*t.a);
        InferResult body = under(t.x, a.ty, *t.b);
        Grade s = take(body.context, t.x);
        return {ctx_sum(ctx_scale(clamp(s), std::move(a.context)), body.context), body.ty};
      }
      case TermKind::TensorLet: {
        InferResult a = go(*t.a);
        if (!a.ty.is(TyKind::Tensor)) shape(*t.a, "a tensor pair (_, _)", a.ty);
        push(t.x, a.ty.lhs());
        push(t.y, a.ty.rhs());
        InferResult body = go(*t.b);
        pop(t.y);
        pop(t.x);
        Grade sx = take(body.context, t.x);
        Grade sy = take(body.context, t.y);
        return {ctx_sum(ctx_scale(max(sx, sy), std::move(a.context)), body.context), body.ty};
      }
      case TermKind::Case: {
        InferResult a = go(*t.a);
        if (!a.ty.is(TyKind::Sum)) shape(*t.a, "a sum _ + _", a.ty);
        InferResult l = under(t.x, a.ty.lhs(), *t.b);
        InferResult r = under(t.y, a.ty.rhs(), *t.c);
        Grade sx = take(l.context, t.x);
        Grade sy = take(r.context, t.y);
        Ty joined;
        try {
          joined = ty_lattice(LatticeDir::Max, l.ty, r.ty);
        } catch (const Incompatible&) {
          throw TypeError(TypeErrorKind::Incompatible, t.span,
                          "case branches have incompatible types " + show(l.ty) + " and " + show(r.ty),
                          show(l.ty), show(r.ty));
        }
        Grade s = clamp(max(sx, sy));
        return {ctx_sum(ctx_scale(s, std::move(a.context)), ctx_max(std::move(l.context), r.context)), joined};
      }
      case TermKind::Rnd: {
        InferResult a = go(*t.a);
        need_subtype(*t.a, a.ty, Ty::num(), "the operand of rnd");
        return {std::move(a.context), Ty::monad(eps_, Ty::num())};
      }
      case TermKind::Ret: {
        InferResult a = go(*t.a);
        return {std::move(a.context), Ty::monad(Grade(), a.ty)};
      }
      case TermKind::Bind: {
        InferResult a = go(*t.a);
        if (!a.ty.is(TyKind::Monad)) shape(*t.a, "a monadic computation M[_]_", a.ty);
        InferResult body = under(t.x, a.ty.inner(), *t.b);
        if (!body.ty.is(TyKind::Monad)) shape(*t.b, "a monadic computation M[_]_", body.ty);
        Grade s = take(body.context, t.x);
        Grade grade = s * a.ty.grade() + body.ty.grade();
        return {ctx_sum(ctx_scale(s, std::move(a.context)), body.context), Ty::monad(grade, body.ty.inner())};
      }
      case TermKind::Op: {
        const Ty& sig = Signature::standard().type_of(t.op);
        InferResult a = go(*t.a);
        need_subtype(*t.a, a.ty, sig.lhs(), std::string("the argument of ") + to_string(t.op));
        return {std::move(a.context), sig.rhs()};
      }
    }
    throw TypeError(TypeErrorKind::ShapeMismatch, t.span, "unknown term");
  }

  const GlobalEnv& globals_;
  numerics::FpFormat fmt_;
  Grade eps_;
  std::unordered_map<std::string, std::vector<Ty>> scope_;
};

}  // namespace

InferResult infer(const Skeleton& skel, const Term& e, const GlobalEnv& globals, const numerics::FpFormat& fmt) {
  Inferrer inf(globals, fmt);
  for (const auto& [x, t] : skel) inf.push(x, t);
  return inf.run(e);
}

Ty result_type(const Ty& fn, std::size_t arity) {
  Ty t = fn;
  for (std::size_t i = 0; i < arity && t.is(TyKind::Lolli); ++i) t = t.rhs();
  return t;
}

Grade monadic_grade(const Ty& t) {
  switch (t.kind()) {
    case TyKind::Monad: return t.grade() + monadic_grade(t.inner());
    case TyKind::Bang: return monadic_grade(t.inner());
    case TyKind::Tensor:
    case TyKind::With:
    case TyKind::Sum: return max(monadic_grade(t.lhs()), monadic_grade(t.rhs()));
    default: return Grade();
  }
}

DeclCheck check_decl(const Decl& d, const GlobalEnv& globals, const numerics::FpFormat& fmt) {
  DeclCheck out;
  out.name = d.name;
  out.declared = d.declared_type();
  try {
    InferResult r = infer({}, *d.as_lambda(), globals, fmt);
    out.inferred = r.ty;
    out.grade = monadic_grade(result_type(r.ty, d.params.size()));
    if (!subtype(r.ty, out.declared)) {
      Ty inferred_result = result_type(r.ty, d.params.size());
      throw TypeError(TypeErrorKind::NotSubtype, d.span,
                      "declaration " + d.name + " has result type " + pretty(inferred_result, fmt) +
                          ", which is not a subtype of the declared " + pretty(d.result, fmt),
                      pretty(d.result, fmt), pretty(inferred_result, fmt));
    }
  } catch (const TypeError& e) {
    out.error = e;
  }
  return out;
}

std::vector<DeclCheck> infer_program(const SourceProgram& p, GlobalEnv& globals, const numerics::FpFormat& fmt) {
  std::vector<DeclCheck> out;
  for (const auto& d : p.decls) {
    DeclCheck c = check_decl(d, globals, fmt);
    if (c.ok()) globals.add(d);
    else globals.add_failed(d.name);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace numfuzz
