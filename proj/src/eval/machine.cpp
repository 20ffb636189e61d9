#include <unordered_map>

#include "numfuzz/eval/eval.hpp"

namespace numfuzz::eval {

using numerics::Real;

struct Closure {
  const Function* fn;
  std::vector<Value> captured;
  std::vector<Value> partial;
};

struct Value::Node {
  Value a, b;
  std::shared_ptr<const Closure> closure;
};

namespace {

enum class Op {
  Local, Global, Unit, Const, Err, WithPair, TensorPair, Inl, Inr, Box, Rnd, Ret, Bind, Let,
  Proj1, Proj2, TensorLet, BoxLet, Case, Prim, Call, MakeClosure,
  // A call of a declaration whose body is `s = op x; rnd s`. With one child
  // the argument is evaluated whole; with two the pair is never built.
  Rounded
};

struct Code {
  Op op = Op::Unit;
  int slot = -1, slot2 = -1;
  int global = -1;
  Real num;
  PrimOp prim = PrimOp::Add;
  std::unique_ptr<Code> a, b, c;
  std::vector<std::unique_ptr<Code>> args;
  const Function* fn = nullptr;
  std::vector<int> capture_from;
};

}  // namespace

struct Function {
  std::string name;
  int arity = 0;
  int frame_size = 0;
  std::vector<int> capture_to;
  std::unique_ptr<Code> body;
  // Frames of finished calls, reused without clearing.
  mutable std::vector<std::vector<Value>> spare;
};

namespace {

class Frame {
 public:
  explicit Frame(const Function& fn) : fn_(fn) {
    if (fn.spare.empty()) {
      slots_.resize(static_cast<std::size_t>(fn.frame_size));
    } else {
      slots_ = std::move(fn.spare.back());
      fn.spare.pop_back();
    }
  }
  ~Frame() { fn_.spare.push_back(std::move(slots_)); }
  Frame(const Frame&) = delete;
  Frame& operator=(const Frame&) = delete;

  std::vector<Value>& slots() { return slots_; }
  Value& operator[](std::size_t i) { return slots_[i]; }

 private:
  const Function& fn_;
  std::vector<Value> slots_;
};

}  // namespace

Value Value::num(Real k) {
  Value v;
  v.kind_ = Kind::Num;
  v.num_ = std::move(k);
  return v;
}

Value Value::err() {
  Value v;
  v.kind_ = Kind::Err;
  return v;
}

Value Value::with_pair(Value a, Value b) { return make(Kind::WithPair, std::move(a), std::move(b)); }
Value Value::tensor_pair(Value a, Value b) { return make(Kind::TensorPair, std::move(a), std::move(b)); }
Value Value::inl(Value a) { return make(Kind::Inl, std::move(a), Value()); }
Value Value::inr(Value a) { return make(Kind::Inr, std::move(a), Value()); }
Value Value::box(Value a) { return make(Kind::Box, std::move(a), Value()); }
Value Value::ret(Value a) { return make(Kind::Ret, std::move(a), Value()); }

const Value& Value::first() const { return node_->a; }
const Value& Value::second() const { return node_->b; }

TermPtr Value::to_term() const {
  switch (kind_) {
    case Kind::Unit: return term::unit();
    case Kind::Num: return term::constant(*num_);
    case Kind::Err: return term::err();
    case Kind::WithPair: return term::with_pair(first().to_term(), second().to_term());
    case Kind::TensorPair: return term::tensor_pair(first().to_term(), second().to_term());
    case Kind::Inl: return term::inl(first().to_term(), Ty::unit());
    case Kind::Inr: return term::inr(first().to_term(), Ty::unit());
    // box grades are not kept at run time
    case Kind::Box: return term::box(first().to_term(), Grade::one());
    case Kind::Ret: return term::ret(first().to_term());
    case Kind::Closure: break;
  }
  throw std::invalid_argument("a function value has no term form");
}

std::string Value::to_string() const {
  switch (kind_) {
    case Kind::Unit: return "()";
    case Kind::Num: return num_->to_string();
    case Kind::Err: return "err";
    case Kind::WithPair: return "(|" + first().to_string() + ", " + second().to_string() + "|)";
    case Kind::TensorPair: return "(" + first().to_string() + ", " + second().to_string() + ")";
    case Kind::Inl: return "inl " + first().to_string();
    case Kind::Inr: return "inr " + first().to_string();
    case Kind::Box: return "[" + first().to_string() + "]";
    case Kind::Ret: return "ret " + first().to_string();
    case Kind::Closure: return "<function " + node_->closure->fn->name + ">";
  }
  return "?";
}

Value Value::make(Kind k, Value a, Value b) {
  Value v;
  v.kind_ = k;
  v.node_ = std::make_shared<Value::Node>(Value::Node{std::move(a), std::move(b), nullptr});
  return v;
}

// ---------------------------------------------------------------------------
// Compilation

namespace {

struct Scope {
  Scope* parent = nullptr;
  Function* fn = nullptr;
  std::unordered_map<std::string, std::vector<int>> vars;
  std::unordered_map<std::string, int> captured;
  std::vector<int> capture_from;

  int fresh() { return fn->frame_size++; }

  std::optional<int> lookup(const std::string& name) {
    auto it = vars.find(name);
    if (it != vars.end() && !it->second.empty()) return it->second.back();
    auto c = captured.find(name);
    if (c != captured.end()) return c->second;
    if (!parent) return std::nullopt;
    std::optional<int> outer = parent->lookup(name);
    if (!outer) return std::nullopt;
    int s = fresh();
    captured.emplace(name, s);
    capture_from.push_back(*outer);
    fn->capture_to.push_back(s);
    return s;
  }

  int bind(const std::string& name) {
    int s = fresh();
    vars[name].push_back(s);
    return s;
  }
  void unbind(const std::string& name) { vars[name].pop_back(); }
};

}  // namespace

struct Machine::Impl {
  struct Global {
    std::unique_ptr<Function> fn;
    Value closure;
    std::optional<PrimOp> rounded;
  };

  // `fun x. let s = op x in rnd s`
  static std::optional<PrimOp> rounded_primitive(const Decl& d) {
    if (d.params.size() != 1) return std::nullopt;
    const Term& b = *d.body;
    if (!b.is(TermKind::Let) || !b.a->is(TermKind::Op) || b.a->op == PrimOp::Lt) return std::nullopt;
    if (!b.a->a->is(TermKind::Var) || b.a->a->x != d.params[0].name) return std::nullopt;
    if (!b.b->is(TermKind::Rnd) || !b.b->a->is(TermKind::Var) || b.b->a->x != b.x) return std::nullopt;
    return b.a->op;
  }

  numerics::FpFormat fmt;
  std::vector<Global> globals;
  std::unordered_map<std::string, int> global_index;
  std::vector<std::unique_ptr<Function>> functions;
  Mode mode = Mode::Ideal;
  std::uint64_t fuel = 0;

  std::unique_ptr<Code> compile(const Term& t, Scope& scope) {
    auto c = std::make_unique<Code>();
    switch (t.kind) {
      case TermKind::Var:
        if (auto s = scope.lookup(t.x)) {
          c->op = Op::Local;
          c->slot = *s;
        } else {
          auto it = global_index.find(t.x);
          if (it == global_index.end()) throw Stuck("unbound variable " + t.x);
          c->op = Op::Global;
          c->global = it->second;
        }
        return c;
      case TermKind::Unit: c->op = Op::Unit; return c;
      case TermKind::Const:
        c->op = Op::Const;
        c->num = t.num;
        return c;
      case TermKind::Err: c->op = Op::Err; return c;
      case TermKind::WithPair: c->op = Op::WithPair; break;
      case TermKind::TensorPair: c->op = Op::TensorPair; break;
      case TermKind::Inl: c->op = Op::Inl; break;
      case TermKind::Inr: c->op = Op::Inr; break;
      case TermKind::Box: c->op = Op::Box; break;
      case TermKind::Rnd: c->op = Op::Rnd; break;
      case TermKind::Ret: c->op = Op::Ret; break;
      case TermKind::Proj1: c->op = Op::Proj1; break;
      case TermKind::Proj2: c->op = Op::Proj2; break;
      case TermKind::Op:
        c->op = Op::Prim;
        c->prim = t.op;
        break;
      case TermKind::Bind:
      case TermKind::Let:
      case TermKind::BoxLet: {
        c->op = t.is(TermKind::Bind) ? Op::Bind : t.is(TermKind::Let) ? Op::Let : Op::BoxLet;
        c->a = compile(*t.a, scope);
        c->slot = scope.bind(t.x);
        c->b = compile(*t.b, scope);
        scope.unbind(t.x);
        return c;
      }
      case TermKind::TensorLet:
        c->op = Op::TensorLet;
        c->a = compile(*t.a, scope);
        c->slot = scope.bind(t.x);
        c->slot2 = scope.bind(t.y);
        c->b = compile(*t.b, scope);
        scope.unbind(t.y);
        scope.unbind(t.x);
        return c;
      case TermKind::Case:
        c->op = Op::Case;
        c->a = compile(*t.a, scope);
        c->slot = scope.bind(t.x);
        c->b = compile(*t.b, scope);
        scope.unbind(t.x);
        c->slot2 = scope.bind(t.y);
        c->c = compile(*t.c, scope);
        scope.unbind(t.y);
        return c;
      case TermKind::App: {
        c->op = Op::Call;
        std::vector<const Term*> spine;
        const Term* f = &t;
        while (f->is(TermKind::App)) {
          spine.push_back(f->b.get());
          f = f->a.get();
        }
        if (spine.size() == 1 && f->is(TermKind::Var) && !scope.lookup(f->x)) {
          auto it = global_index.find(f->x);
          if (it != global_index.end() && globals[static_cast<std::size_t>(it->second)].rounded) {
            PrimOp op = *globals[static_cast<std::size_t>(it->second)].rounded;
            const Term& arg = *spine[0];
            c->op = Op::Rounded;
            c->prim = op;
            bool pair = op == PrimOp::Add ? arg.is(TermKind::WithPair)
                                          : (op == PrimOp::Mul || op == PrimOp::Div) && arg.is(TermKind::TensorPair);
            if (pair) {
              c->a = compile(*arg.a, scope);
              c->b = compile(*arg.b, scope);
            } else if (op == PrimOp::Sqrt && arg.is(TermKind::Box)) {
              c->a = compile(*arg.a, scope);
              c->slot = 0;
            } else {
              c->a = compile(arg, scope);
            }
            return c;
          }
        }
        c->a = compile(*f, scope);
        for (auto it = spine.rbegin(); it != spine.rend(); ++it) c->args.push_back(compile(**it, scope));
        return c;
      }
      case TermKind::Lam: {
        std::vector<std::string> params;
        const Term* body = &t;
        while (body->is(TermKind::Lam)) {
          params.push_back(body->x);
          body = body->a.get();
        }
        auto fn = std::make_unique<Function>();
        fn->name = "fun";
        Scope inner;
        c->op = Op::MakeClosure;
        compile_function(*fn, params, *body, &scope, inner);
        c->fn = fn.get();
        c->capture_from = std::move(inner.capture_from);
        functions.push_back(std::move(fn));
        return c;
      }
    }
    c->a = compile(*t.a, scope);
    if (t.b) c->b = compile(*t.b, scope);
    return c;
  }

  void compile_function(Function& fn, const std::vector<std::string>& params, const Term& body, Scope* parent,
                        Scope& scope) {
    scope.parent = parent;
    scope.fn = &fn;
    fn.arity = static_cast<int>(params.size());
    for (const auto& p : params) scope.bind(p);
    fn.body = compile(body, scope);
  }

  explicit Impl(const GlobalEnv& env, const numerics::FpFormat& f) : fmt(f) {
    for (const std::string& name : env.order()) {
      const Decl* d = env.decl(name);
      Global g;
      g.fn = std::make_unique<Function>();
      g.fn->name = name;
      std::vector<std::string> params;
      for (const auto& p : d->params) params.push_back(p.name);
      Scope scope;
      compile_function(*g.fn, params, *d->body, nullptr, scope);
      if (g.fn->arity > 0) g.closure = closure_value(g.fn.get(), {}, {});
      g.rounded = rounded_primitive(*d);
      global_index[name] = static_cast<int>(globals.size());
      globals.push_back(std::move(g));
    }
  }

  static Value closure_value(const Function* fn, std::vector<Value> captured, std::vector<Value> partial) {
    Value v;
    v.kind_ = Value::Kind::Closure;
    auto n = std::make_shared<Value::Node>();
    n->closure = std::make_shared<const Closure>(Closure{fn, std::move(captured), std::move(partial)});
    v.node_ = std::move(n);
    return v;
  }

  // -------------------------------------------------------------------------
  // Execution

  [[noreturn]] static void stuck(const char* what) { throw Stuck(std::string("evaluation stuck: ") + what); }

  Value run_body(const Function& fn, std::vector<Value>& frame) { return exec(fn.body.get(), frame); }

  Value invoke(const Function& fn, const Closure* c, const Value* args, std::size_t n) {
    Frame frame(fn);
    std::size_t k = 0;
    if (c) {
      for (const Value& v : c->partial) frame[k++] = v;
      for (std::size_t i = 0; i < c->captured.size(); ++i) frame[static_cast<std::size_t>(fn.capture_to[i])] = c->captured[i];
    }
    for (std::size_t i = 0; i < n; ++i) frame[k++] = args[i];
    return run_body(fn, frame.slots());
  }

  Value apply(const Value& f, const Value* args, std::size_t n) {
    Value cur = f;
    while (n > 0) {
      if (!cur.is(Value::Kind::Closure)) stuck("application of a non-function");
      const Closure* c = cur.node_->closure.get();
      const Function& fn = *c->fn;
      std::size_t have = c->partial.size();
      std::size_t need = static_cast<std::size_t>(fn.arity) - have;
      if (n < need) {
        std::vector<Value> partial = c->partial;
        partial.insert(partial.end(), args, args + n);
        return closure_value(&fn, c->captured, std::move(partial));
      }
      cur = invoke(fn, c, args, need);
      args += need;
      n -= need;
    }
    return cur;
  }

  Value prim(PrimOp op, const Value& v) {
    switch (op) {
      case PrimOp::Add:
        if (!v.is(Value::Kind::WithPair)) stuck("add expects (|num, num|)");
        return Value::num(numeral(v.first()) + numeral(v.second()));
      case PrimOp::Mul:
        if (!v.is(Value::Kind::TensorPair)) stuck("mul expects (num, num)");
        return Value::num(numeral(v.first()) * numeral(v.second()));
      case PrimOp::Div:
        if (!v.is(Value::Kind::TensorPair)) stuck("div expects (num, num)");
        return Value::num(numeral(v.first()) / numeral(v.second()));
      case PrimOp::Sqrt:
        if (!v.is(Value::Kind::Box)) stuck("sqrt expects a box");
        return Value::num(sqrt(numeral(v.first())));
      case PrimOp::Lt: {
        if (!v.is(Value::Kind::Box) || !v.first().is(Value::Kind::WithPair)) stuck("lt expects a boxed pair");
        const Value& p = v.first();
        return Real::less(numeral(p.first()), numeral(p.second())) ? Value::inl(Value()) : Value::inr(Value());
      }
    }
    stuck("unknown primitive");
  }

  Value round(const Value& v) {
    if (!v.is(Value::Kind::Num)) stuck("rnd applied to a non-number");
    if (mode == Mode::Ideal) return Value::ret(v);
    numerics::ExceptionalReason why{};
    std::optional<Real> r = v.number().rounded_up(fmt, &why);
    if (!r) {
      if (mode == Mode::Fp) throw NonRepresentable(why);
      return Value::err();
    }
    return Value::ret(Value::num(std::move(*r)));
  }

  static const Real& numeral(const Value& x) {
    if (!x.is(Value::Kind::Num)) stuck("primitive applied to a non-number");
    return x.number();
  }

  // Exact result of a Rounded instruction, before rounding.
  Real rounded_operand(const Code* c, std::vector<Value>& frame) {
    if (c->b) {
      Value x = exec(c->a.get(), frame);
      Value y = exec(c->b.get(), frame);
      switch (c->prim) {
        case PrimOp::Add: return numeral(x) + numeral(y);
        case PrimOp::Mul: return numeral(x) * numeral(y);
        case PrimOp::Div: return numeral(x) / numeral(y);
        default: stuck("rounded primitive with two operands");
      }
    }
    if (c->slot == 0) return sqrt(numeral(exec(c->a.get(), frame)));
    return prim(c->prim, exec(c->a.get(), frame)).number();
  }

  // Rounds per mode; nullopt stands for err.
  std::optional<Real> round_number(const Real& k) {
    if (mode == Mode::Ideal) return k;
    numerics::ExceptionalReason why{};
    std::optional<Real> r = k.rounded_up(fmt, &why);
    if (!r && mode == Mode::Fp) throw NonRepresentable(why);
    return r;
  }

  Value exec(const Code* c, std::vector<Value>& frame) {
    for (;;) {
      if (fuel == 0) throw FuelExhausted();
      --fuel;
      switch (c->op) {
        case Op::Local: return frame[static_cast<std::size_t>(c->slot)];
        case Op::Global: {
          const Global& g = globals[static_cast<std::size_t>(c->global)];
          if (g.fn->arity > 0) return g.closure;
          Frame inner(*g.fn);
          return exec(g.fn->body.get(), inner.slots());
        }
        case Op::Unit: return Value();
        case Op::Const: return Value::num(c->num);
        case Op::Err: return Value::err();
        case Op::WithPair:
        case Op::TensorPair: {
          Value a = exec(c->a.get(), frame);
          Value b = exec(c->b.get(), frame);
          return Value::make(c->op == Op::WithPair ? Value::Kind::WithPair : Value::Kind::TensorPair, std::move(a),
                      std::move(b));
        }
        case Op::Inl: return Value::inl(exec(c->a.get(), frame));
        case Op::Inr: return Value::inr(exec(c->a.get(), frame));
        case Op::Box: return Value::box(exec(c->a.get(), frame));
        case Op::Ret: return Value::ret(exec(c->a.get(), frame));
        case Op::Rnd: return round(exec(c->a.get(), frame));
        case Op::Prim: return prim(c->prim, exec(c->a.get(), frame));
        case Op::Proj1:
        case Op::Proj2: {
          Value p = exec(c->a.get(), frame);
          if (!p.is(Value::Kind::WithPair)) stuck("projection from a non-pair");
          return c->op == Op::Proj1 ? p.first() : p.second();
        }
        case Op::Rounded: {
          // the callee's own steps
          if (fuel < 3) throw FuelExhausted();
          fuel -= 3;
          std::optional<Real> r = round_number(rounded_operand(c, frame));
          return r ? Value::ret(Value::num(std::move(*r))) : Value::err();
        }
        case Op::Bind: {
          if (c->a->op == Op::Rounded) {
            if (fuel < 4) throw FuelExhausted();
            fuel -= 4;
            std::optional<Real> r = round_number(rounded_operand(c->a.get(), frame));
            if (!r) return Value::err();
            frame[static_cast<std::size_t>(c->slot)] = Value::num(std::move(*r));
            c = c->b.get();
            continue;
          }
          Value m = exec(c->a.get(), frame);
          if (m.is(Value::Kind::Err)) return m;
          if (!m.is(Value::Kind::Ret)) stuck("let-bind of a non-monadic value");
          frame[static_cast<std::size_t>(c->slot)] = m.first();
          c = c->b.get();
          continue;
        }
        case Op::Let:
          frame[static_cast<std::size_t>(c->slot)] = exec(c->a.get(), frame);
          c = c->b.get();
          continue;
        case Op::BoxLet: {
          Value m = exec(c->a.get(), frame);
          if (!m.is(Value::Kind::Box)) stuck("box elimination of a non-box");
          frame[static_cast<std::size_t>(c->slot)] = m.first();
          c = c->b.get();
          continue;
        }
        case Op::TensorLet: {
          Value m = exec(c->a.get(), frame);
          if (!m.is(Value::Kind::TensorPair)) stuck("pair elimination of a non-pair");
          frame[static_cast<std::size_t>(c->slot)] = m.first();
          frame[static_cast<std::size_t>(c->slot2)] = m.second();
          c = c->b.get();
          continue;
        }
        case Op::Case: {
          Value m = exec(c->a.get(), frame);
          if (m.is(Value::Kind::Inl)) {
            frame[static_cast<std::size_t>(c->slot)] = m.first();
            c = c->b.get();
          } else if (m.is(Value::Kind::Inr)) {
            frame[static_cast<std::size_t>(c->slot2)] = m.first();
            c = c->c.get();
          } else {
            stuck("case on a non-sum");
          }
          continue;
        }
        case Op::Call: {
          if (c->a->op == Op::Global) {
            // Saturated call of a declaration: arguments go straight into its frame.
            const Global& g = globals[static_cast<std::size_t>(c->a->global)];
            if (g.fn->arity > 0 && static_cast<std::size_t>(g.fn->arity) == c->args.size()) {
              if (fuel == 0) throw FuelExhausted();
              --fuel;
              Frame callee(*g.fn);
              for (std::size_t i = 0; i < c->args.size(); ++i) callee[i] = exec(c->args[i].get(), frame);
              return run_body(*g.fn, callee.slots());
            }
          }
          Value f = exec(c->a.get(), frame);
          std::vector<Value> args;
          args.reserve(c->args.size());
          for (const auto& a : c->args) args.push_back(exec(a.get(), frame));
          return apply(f, args.data(), args.size());
        }
        case Op::MakeClosure: {
          std::vector<Value> captured;
          captured.reserve(c->capture_from.size());
          for (int s : c->capture_from) captured.push_back(frame[static_cast<std::size_t>(s)]);
          return closure_value(c->fn, std::move(captured), {});
        }
      }
      stuck("unknown instruction");
    }
  }
};

Machine::Machine(const GlobalEnv& globals, const numerics::FpFormat& fmt)
    : impl_(std::make_unique<Impl>(globals, fmt)) {}

Machine::~Machine() = default;

Value Machine::run(const Term& closed, Mode mode, std::uint64_t fuel) {
  Function top;
  top.name = "main";
  Scope scope;
  impl_->compile_function(top, {}, closed, nullptr, scope);
  impl_->mode = mode;
  impl_->fuel = fuel;
  std::vector<Value> frame(static_cast<std::size_t>(top.frame_size));
  return impl_->run_body(top, frame);
}

Value Machine::call(const std::string& name, const std::vector<Value>& args, Mode mode, std::uint64_t fuel) {
  auto it = impl_->global_index.find(name);
  if (it == impl_->global_index.end()) throw std::invalid_argument("no declaration named " + name);
  impl_->mode = mode;
  impl_->fuel = fuel;
  const auto& g = impl_->globals[static_cast<std::size_t>(it->second)];
  if (g.fn->arity == 0) {
    std::vector<Value> frame(static_cast<std::size_t>(g.fn->frame_size));
    Value v = impl_->run_body(*g.fn, frame);
    return args.empty() ? v : impl_->apply(v, args.data(), args.size());
  }
  return impl_->apply(g.closure, args.data(), args.size());
}

Value eval(const Decl& d, const GlobalEnv& globals, const std::vector<TermPtr>& args, Mode mode,
           const numerics::FpFormat& fmt) {
  if (args.size() != d.params.size())
    throw std::invalid_argument(d.name + " expects " + std::to_string(d.params.size()) + " arguments, got " +
                                std::to_string(args.size()));
  GlobalEnv env = globals;
  if (!env.decl(d.name)) env.add(d);
  Machine m(env, fmt);
  std::vector<Value> values;
  for (const auto& a : args) values.push_back(m.run(*a, mode));
  return m.call(d.name, values, mode);
}

}  // namespace numfuzz::eval
