#include "numfuzz/driver/validate.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "numfuzz/numerics/rational.hpp"
#include "numfuzz/syntax/pretty.hpp"

namespace numfuzz::driver {

using eval::Value;

Rational sample_input(std::mt19937_64& rng, const Rational& lo, const Rational& hi, const numerics::FpFormat& fmt) {
  std::uniform_real_distribution<double> u(std::log2(lo.get_d()), std::log2(hi.get_d()));
  Rational x(std::exp2(u(rng)));
  if (x < lo) x = lo;
  if (x > hi) x = hi;
  numerics::RoundResult r = numerics::round_up(x, fmt);
  if (r.is_exceptional()) throw std::invalid_argument("input range leaves the format's normal range");
  return r.value();
}

namespace {

Value build(const Ty& t, std::mt19937_64& rng, const ValidationConfig& cfg) {
  switch (t.kind()) {
    case TyKind::Unit: return Value::unit();
    case TyKind::Num: return Value::num(numerics::Real(sample_input(rng, cfg.lo, cfg.hi, cfg.fmt)));
    case TyKind::Monad: return Value::ret(build(t.inner(), rng, cfg));
    case TyKind::Bang: return Value::box(build(t.inner(), rng, cfg));
    case TyKind::Tensor: {
      Value a = build(t.lhs(), rng, cfg);
      return Value::tensor_pair(std::move(a), build(t.rhs(), rng, cfg));
    }
    case TyKind::With: {
      Value a = build(t.lhs(), rng, cfg);
      return Value::with_pair(std::move(a), build(t.rhs(), rng, cfg));
    }
    case TyKind::Sum: return Value::inl(build(t.lhs(), rng, cfg));
    case TyKind::Lolli: break;
  }
  throw std::invalid_argument("cannot sample a function-typed parameter");
}

bool finite_leaves(const Ty& t, bool under_monad) {
  switch (t.kind()) {
    case TyKind::Unit: return true;
    case TyKind::Num: return under_monad;
    case TyKind::Monad: return !t.grade().is_infinite() && finite_leaves(t.inner(), true);
    case TyKind::Bang: return finite_leaves(t.inner(), under_monad);
    case TyKind::Tensor:
    case TyKind::With:
    case TyKind::Sum: return finite_leaves(t.lhs(), under_monad) && finite_leaves(t.rhs(), under_monad);
    case TyKind::Lolli: return false;
  }
  return false;
}

struct Checker {
  const ValidationConfig& cfg;
  ValidationSummary& summary;
  int trial = 0;
  bool failed = false;
  bool inconclusive = false;

  void note(const std::string& what) {
    if (summary.incidents.size() < 10) summary.incidents.push_back("trial " + std::to_string(trial) + ": " + what);
  }

  void leaf(const Value& ideal, const Value& fp, const Grade& bound) {
    if (!ideal.is(Value::Kind::Num) || !fp.is(Value::Kind::Num)) {
      failed = true;
      note("result shapes differ");
      return;
    }
    eval::Certificate c = eval::certify_rp(ideal.number(), fp.number(), bound, cfg.max_bits);
    if (!bound.is_infinite() && !bound.is_zero())
      summary.max_ratio = std::max(summary.max_ratio, c.distance / bound.value().get_d());
    if (c.verdict == eval::Verdict::Violation) {
      failed = true;
      note("violation: ideal " + ideal.number().to_decimal() + ", fp " + fp.number().to_decimal() + ", bound " +
           pretty(bound, cfg.fmt));
    } else if (c.verdict == eval::Verdict::Inconclusive) {
      inconclusive = true;
      note("inconclusive at " + std::to_string(cfg.max_bits) + " bits");
    }
  }

  void walk(const Ty& t, const Value& ideal, const Value& fp, const Grade& acc) {
    switch (t.kind()) {
      case TyKind::Unit:
      case TyKind::Lolli: return;
      case TyKind::Num: return leaf(ideal, fp, acc);
      case TyKind::Monad: {
        if (!ideal.is(Value::Kind::Ret) || !fp.is(Value::Kind::Ret)) {
          failed = true;
          return note("result is not a returned value");
        }
        Grade next = cfg.override_bound ? *cfg.override_bound : acc + t.grade();
        return walk(t.inner(), ideal.first(), fp.first(), next);
      }
      case TyKind::Bang: return walk(t.inner(), ideal.first(), fp.first(), acc);
      case TyKind::Tensor:
      case TyKind::With:
        walk(t.lhs(), ideal.first(), fp.first(), acc);
        return walk(t.rhs(), ideal.second(), fp.second(), acc);
      case TyKind::Sum:
        if (ideal.kind() != fp.kind()) {
          failed = true;
          return note("the two runs took different branches");
        }
        return walk(ideal.is(Value::Kind::Inl) ? t.lhs() : t.rhs(), ideal.first(), fp.first(), acc);
    }
  }
};

}  // namespace

std::vector<Value> sample_arguments(const Decl& d, std::mt19937_64& rng, const ValidationConfig& cfg) {
  std::vector<Value> args;
  args.reserve(d.params.size());
  for (const auto& p : d.params) args.push_back(build(p.ty, rng, cfg));
  return args;
}

ValidationSummary validate(const GlobalEnv& env, const std::string& entry, const Ty& result,
                           const ValidationConfig& cfg) {
  const Decl* d = env.decl(entry);
  if (!d) throw std::invalid_argument("no checked declaration named " + entry);
  if (cfg.trials < 1) throw std::invalid_argument("trials must be at least 1");
  if (sgn(cfg.lo) <= 0 || cfg.lo > cfg.hi) throw std::invalid_argument("the input range must satisfy 0 < lo <= hi");
  if (!cfg.override_bound && !finite_leaves(result, false))
    throw std::invalid_argument(entry + " has no finite error bound: " + pretty(result, cfg.fmt));

  ValidationSummary summary;
  eval::Machine machine(env, cfg.fmt);
  for (int i = 0; i < cfg.trials; ++i) {
    std::seed_seq seq{cfg.seed, static_cast<std::uint64_t>(i)};
    std::mt19937_64 rng(seq);
    std::vector<Value> args = sample_arguments(*d, rng, cfg);
    Checker check{cfg, summary, i};
    ++summary.trials;
    Value ideal = machine.call(entry, args, eval::Mode::Ideal);
    Value fp;
    try {
      fp = machine.call(entry, args, eval::Mode::Fp);
    } catch (const eval::NonRepresentable& e) {
      ++summary.exceptional;
      check.note(e.what());
      continue;
    }
    check.walk(result, ideal, fp, Grade());
    if (check.failed) ++summary.violations;
    else if (check.inconclusive) ++summary.inconclusive;
    else ++summary.certified;
  }
  return summary;
}

std::string render_summary(const std::string& entry, const ValidationConfig& cfg, const ValidationSummary& s) {
  std::ostringstream os;
  os << "validate " << entry << ": " << s.trials << " trials, seed " << cfg.seed << ", range ["
     << cfg.lo.get_d() << ", " << cfg.hi.get_d() << "]";
  if (cfg.override_bound) os << ", bound overridden to " << pretty(*cfg.override_bound, cfg.fmt);
  os << "\n";
  os << "  certified     " << s.certified << "\n";
  os << "  violations    " << s.violations << "\n";
  os << "  inconclusive  " << s.inconclusive << "\n";
  if (s.exceptional) os << "  exceptional   " << s.exceptional << "\n";
  os << "  max RP/bound  " << s.max_ratio << "\n";
  for (const auto& line : s.incidents) os << "  " << line << "\n";
  return os.str();
}

}  // namespace numfuzz::driver
