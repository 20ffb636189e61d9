#include <doctest.h>
#include <mpfr.h>

#include "gen.hpp"
#include "numfuzz/eval/eval.hpp"
#include "numfuzz/numerics/rational.hpp"
#include "numfuzz/syntax/pretty.hpp"
#include "numfuzz/util/stack.hpp"
#include "support.hpp"

using namespace numfuzz;
using namespace numfuzz::eval;
using numerics::Real;
namespace tg = numfuzz::testgen;
namespace ts = numfuzz::testsupport;

namespace {

Rational mpfr_round_up(const Rational& x) {
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDU);
  mpz_class m;
  long e = mpfr_get_z_2exp(m.get_mpz_t(), t);
  mpfr_clear(t);
  return numerics::ldexp(Rational(m), e);
}

Rational q(const char* decimal) { return *numerics::parse_decimal(decimal); }

TermPtr num(const Rational& r) { return term::constant(Real(r)); }

Rational payload(const Value& v) {
  REQUIRE(v.is(Value::Kind::Ret));
  REQUIRE(v.first().is(Value::Kind::Num));
  REQUIRE(v.first().number().is_exact());
  return v.first().number().exact();
}

const char* kProgram =
    "function FMA (x: num) (y: num) (z: num) : M[eps]num { a = mul (x,y); b = add (|a,z|); rnd b }\n"
    "function MA (x: num) (y: num) (z: num) : M[2*eps]num { s = mulfp (x,y); let a = s; addfp (|a,z|) }\n"
    "function pow2' (x: ![2]num) : M[eps]num { let [x1] = x; mulfp (x1, x1) }\n"
    "function pow4 (x: ![4]num) : M[3*eps]num { let [x1] = x; let y = pow2' [x1 {2}]; pow2' [y {2}] }\n"
    "function sq (x: ![2]num) : M[eps]num { let [y] = x; rnd (mul (y, y)) }\n"
    "function sq_then (x: ![2]num) : M[2*eps]num { let a = sq x; rnd a }\n"
    "function hyp (x: ![2]num) (y: ![2]num) : M[2.5*eps]num {\n"
    "  let [a] = x; let [b] = y;\n"
    "  let s = addfp (|mul (a, a), mul (b, b)|);\n"
    "  sqrtfp [s {0.5}]\n"
    "}\n";

}  // namespace

TEST_CASE("step examples") {
  GlobalEnv env;
  TermPtr unit_law = term::bind("x", term::ret(num(2)), term::ret(term::var("x")));
  TermPtr s = step(unit_law, Mode::Ideal, env);
  CHECK(term_equal(*s, *term::ret(num(2))));
  CHECK(step(s, Mode::Ideal, env) == nullptr);

  TermPtr r = term::rnd(num(q("0.1")));
  TermPtr fp = step(r, Mode::Fp, env);
  REQUIRE(fp->is(TermKind::Ret));
  CHECK(fp->a->num.exact() == mpfr_round_up(q("0.1")));
  CHECK(fp->a->num.exact() > q("0.1"));
  TermPtr id = step(r, Mode::Ideal, env);
  CHECK(term_equal(*id, *term::ret(num(q("0.1")))));

  // exceptional rounding
  TermPtr big = term::rnd(num(Rational(mpz_class(1) << 1100)));
  CHECK_THROWS_AS(step(big, Mode::Fp, env), NonRepresentable);
  CHECK(step(big, Mode::FpExceptional, env)->is(TermKind::Err));
  TermPtr chained = term::bind("x", term::err(), term::ret(term::var("x")));
  CHECK(step(chained, Mode::FpExceptional, env)->is(TermKind::Err));

  // ill-formed closed terms are stuck
  CHECK_THROWS_AS(step(term::proj(1, term::tensor_pair(num(1), num(2))), Mode::Ideal, env), Stuck);
}

TEST_CASE("mode-agnostic semantics") {
  GlobalEnv env;
  TermPtr inner = term::bind("x", term::rnd(num(2)), term::ret(term::var("x")));
  CHECK(is_agnostic_value(*inner));
  CHECK_FALSE(is_value(*inner));
  TermPtr nested = term::bind("y", inner, term::rnd(term::var("y")));
  CHECK_FALSE(is_agnostic_value(*nested));
  TermPtr s = step_agnostic(nested, env);
  TermPtr expected = term::bind("x", term::rnd(num(2)), term::bind("y", term::ret(term::var("x")), term::rnd(term::var("y"))));
  CHECK(term_equal(*s, *expected));
  CHECK(step_agnostic(s, env) == nullptr);

  // the inner binder is renamed when it shares the outer bound name
  TermPtr shadow = term::bind("y", term::bind("y", term::rnd(num(3)), term::ret(term::var("y"))),
                              term::rnd(term::op(PrimOp::Mul, term::tensor_pair(term::var("y"), num(2)))));
  TermPtr t = step_agnostic(shadow, env);
  REQUIRE(t->is(TermKind::Bind));
  CHECK(t->x != "y");
  CHECK(free_vars(*t).empty());
  CHECK(term_equal(*normalize(t, Mode::Ideal, env), *normalize(shadow, Mode::Ideal, env)));
}

TEST_CASE("evaluation examples") {
  GlobalEnv env = ts::load(kProgram);
  const Decl* fma = env.decl("FMA");
  const Decl* ma = env.decl("MA");
  std::vector<TermPtr> tenth{num(q("0.1")), num(q("0.1")), num(q("0.1"))};

  CHECK(payload(eval::eval(*fma, env, tenth, Mode::Ideal)) == q("0.11"));
  Rational f = payload(eval::eval(*fma, env, tenth, Mode::Fp));
  CHECK(f == mpfr_round_up(q("0.11")));
  Rational m = payload(eval::eval(*ma, env, tenth, Mode::Fp));
  CHECK(m >= f);
  Rational ulp = numerics::ldexp(Rational(1), numerics::floor_log2(f) - 52);
  CHECK(m - f <= ulp);

  Value p = eval::eval(*env.decl("pow2'"), env, {term::box(num(Rational(3, 2)), Grade(2L))}, Mode::Fp);
  CHECK(payload(p) == Rational(9, 4));

  tg::Rng rng(11);
  for (int i = 0; i < 50; ++i) {
    Rational k(static_cast<long>(1 + rng() % 1000), static_cast<unsigned long>(1 + rng() % 997));
    k.canonicalize();
    Value v = eval::eval(*env.decl("pow4"), env, {term::box(num(k), Grade(4L))}, Mode::Ideal);
    CHECK(payload(v) == Rational(k * k * k * k));
  }
}

TEST_CASE("certify_rp") {
  CHECK(certify_rp(Real(Rational(3, 7)), Real(Rational(3, 7)), Grade()).verdict == Verdict::Certified);
  Grade eps = tg::eps();
  Rational one_up = 1 + numerics::ldexp(Rational(1), -52);
  CHECK(certify_rp(Real(Rational(1)), Real(one_up), eps).verdict == Verdict::Certified);
  CHECK(certify_rp(Real(one_up), Real(Rational(1)), eps).verdict == Verdict::Certified);
  CHECK(certify_rp(Real(Rational(1)), Real(Rational(2)), eps).verdict == Verdict::Violation);
  // just above the bound: ln(1 + 2^-52 + 2^-100) > 2^-52 fails the exact tests
  Rational over = one_up + numerics::ldexp(Rational(1), -90);
  CHECK(certify_rp(Real(Rational(1)), Real(over), eps).verdict == Verdict::Violation);
  // an irrational ideal value
  Real r2 = sqrt(Real(Rational(2)));
  numerics::RoundResult up = r2.round_up(numerics::FpFormat::binary64());
  Certificate c = certify_rp(r2, Real(up.value()), eps);
  CHECK(c.verdict == Verdict::Certified);
  CHECK(c.bits >= 128);
  CHECK(c.distance < 2.3e-16);
  // zero distance between different expressions cannot be certified at a zero bound
  CHECK(certify_rp(r2 * r2, Real(Rational(2)), Grade(), 512).verdict == Verdict::Inconclusive);
  CHECK(certify_rp(Real(Rational(1)), Real(Rational(2)), Grade::infinity()).verdict == Verdict::Certified);
}

TEST_CASE("exceptional results") {
  GlobalEnv env = ts::load(kProgram);
  const Decl* sq = env.decl("sq");
  const Decl* sq_then = env.decl("sq_then");
  auto arg = [](const char* d) { return std::vector<TermPtr>{term::box(num(q(d)), Grade(2L))}; };
  // overflow
  CHECK(eval::eval(*sq, env, arg("1e200"), Mode::FpExceptional).is(Value::Kind::Err));
  CHECK_THROWS_AS(eval::eval(*sq, env, arg("1e200"), Mode::Fp), NonRepresentable);
  CHECK(eval::eval(*sq_then, env, arg("1e200"), Mode::FpExceptional).is(Value::Kind::Err));
  // below the normal range
  CHECK(eval::eval(*sq, env, arg("1e-200"), Mode::FpExceptional).is(Value::Kind::Err));
  CHECK_THROWS_AS(eval::eval(*sq, env, arg("1e-200"), Mode::Fp), NonRepresentable);
  // ideal mode never rounds
  CHECK(payload(eval::eval(*sq, env, arg("1e200"), Mode::Ideal)) == q("1e400"));
}

TEST_CASE("exceptional runs either certify or end in err") {
  GlobalEnv env = ts::load(kProgram);
  Machine m(env);
  const Decl* hyp = env.decl("hyp");
  tg::Rng rng(3);
  int errs = 0, certified = 0;
  for (int i = 0; i < 300; ++i) {
    std::vector<Value> args;
    for (int j = 0; j < 2; ++j) {
      double x = std::ldexp(1.0 + static_cast<double>(rng() % 1000) / 1000.0, static_cast<int>(rng() % 1400) - 700);
      args.push_back(Value::box(Value::num(Real(Rational(x)))));
    }
    Value fp = m.call("hyp", args, Mode::FpExceptional);
    if (fp.is(Value::Kind::Err)) {
      ++errs;
      continue;
    }
    Value id = m.call("hyp", args, Mode::Ideal);
    Grade bound = monadic_grade(result_type(hyp->declared_type(), 2));
    Certificate c = certify_rp(id.first().number(), fp.first().number(), bound);
    CHECK(c.verdict == Verdict::Certified);
    ++certified;
  }
  CHECK(errs > 0);
  CHECK(certified > 0);
}

TEST_CASE("machine agrees with stepping") {
  tg::Rng rng(77);
  tg::ProgramGen gen(rng);
  GlobalEnv env = ts::load(kProgram);
  Machine m(env);
  int compared = 0;
  for (int i = 0; i < 400; ++i) {
    TermPtr t = gen.monadic({}, 4);
    try {
      infer({}, *t, env);
    } catch (const TypeError&) {
      continue;
    }
    for (Mode mode : {Mode::Ideal, Mode::Fp}) {
      TermPtr stepped;
      try {
        stepped = normalize(t, mode, env);
      } catch (const NonRepresentable&) {
        CHECK_THROWS_AS(m.run(*t, mode), NonRepresentable);
        continue;
      } catch (const numerics::PrecisionExhausted&) {
        continue;
      }
      Value v = m.run(*t, mode);
      if (!term_equal(*stepped, *v.to_term()))
        FAIL(pretty(*t) << "\n  step:    " << pretty(*stepped) << "\n  machine: " << v.to_string());
      ++compared;
    }
  }
  CHECK(compared > 300);

  // calling declarations, partial application through a global
  std::vector<TermPtr> tenth{num(q("0.1")), num(q("0.2")), num(q("0.3"))};
  TermPtr call = term::app(term::app(term::app(term::var("FMA"), tenth[0]), tenth[1]), tenth[2]);
  TermPtr partial = term::let("f", term::app(term::var("FMA"), tenth[0]), term::app(term::app(term::var("f"), tenth[1]), tenth[2]));
  for (Mode mode : {Mode::Ideal, Mode::Fp}) {
    TermPtr expected = normalize(call, mode, env);
    CHECK(term_equal(*expected, *m.run(*call, mode).to_term()));
    CHECK(term_equal(*expected, *m.run(*partial, mode).to_term()));
  }
}

TEST_CASE("each step has one outcome and preserves types") {
  tg::Rng rng(2718);
  tg::ProgramGen gen(rng);
  GlobalEnv env = ts::load(kProgram);
  int programs = 0;
  long steps = 0;
  for (int attempt = 0; attempt < 5000 && programs < 1000; ++attempt) {
    TermPtr t = gen.monadic({}, 3);
    Ty original;
    try {
      original = infer({}, *t, env).ty;
    } catch (const TypeError&) {
      continue;
    }
    ++programs;
    for (int sem = 0; sem < 3; ++sem) {
      TermPtr cur = t;
      for (int i = 0; i < 10000; ++i) {
        TermPtr next, again;
        try {
          if (sem == 0) {
            next = step_agnostic(cur, env);
            again = step_agnostic(cur, env);
          } else {
            Mode mode = sem == 1 ? Mode::Ideal : Mode::Fp;
            next = step(cur, mode, env);
            again = step(cur, mode, env);
          }
        } catch (const NonRepresentable&) {
          break;
        } catch (const numerics::PrecisionExhausted&) {
          break;
        }
        if (!next) break;
        REQUIRE(again);
        CHECK(term_equal(*next, *again));
        ++steps;
        Ty now = infer({}, *next, env).ty;
        if (!subtype(now, original)) FAIL(pretty(*cur) << "\n  -> " << pretty(*next) << "\n  " << pretty(now) << " vs " << pretty(original));
        cur = next;
      }
    }
  }
  CHECK(programs == 1000);
  MESSAGE(steps << " steps checked");
}

TEST_CASE("fuel and deep programs") {
  GlobalEnv env = ts::load(kProgram);
  Machine m(env);
  TermPtr t = parse_term("let a = rnd 1; let b = rnd a; let c = rnd b; ret c");
  CHECK_THROWS_AS(m.run(*t, Mode::Fp, 3), FuelExhausted);
  CHECK_THROWS_AS(normalize(t, Mode::Fp, env, numerics::FpFormat::binary64(), 3), FuelExhausted);

  // a long chain of binds, checked and run on a large stack
  const int n = 50000;
  TermPtr body = term::ret(term::var("x" + std::to_string(n)));
  for (int i = n; i >= 1; --i)
    body = term::bind("x" + std::to_string(i),
                      term::rnd(term::op(PrimOp::Add, term::with_pair(term::var("x" + std::to_string(i - 1)), num(1)))),
                      body);
  body = term::let("x0", num(1), body);
  auto [ty, value] = with_stack(kBigStack, [&] {
    Ty ty = infer({}, *body, env).ty;
    Value v = m.run(*body, Mode::Ideal);
    return std::make_pair(ty, v);
  });
  CHECK(ty == Ty::monad(Grade(static_cast<long>(n)) * tg::eps(), Ty::num()));
  CHECK(payload(value) == Rational(n + 1));
}
