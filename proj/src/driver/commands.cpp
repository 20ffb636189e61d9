#include "numfuzz/driver/commands.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "numfuzz/driver/bench.hpp"
#include "numfuzz/driver/report.hpp"
#include "numfuzz/numerics/rational.hpp"
#include "numfuzz/syntax/parser.hpp"
#include "numfuzz/syntax/pretty.hpp"
#include "numfuzz/util/stack.hpp"

namespace numfuzz::driver {

namespace {

struct Unreadable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A command-level failure with its own exit code.
struct Failure : std::runtime_error {
  int code;
  Failure(int code, const std::string& what) : std::runtime_error(what), code(code) {}
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Unreadable("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

SourceProgram load(const std::string& path, const numerics::FpFormat& fmt) {
  std::string text = read_file(path);
  return parse_program(text, fmt);
}

/// Parse and internal errors become exit codes; `body` runs on a big stack.
template <typename F>
int guarded(std::ostream& err, const std::string& path, F&& body) {
  try {
    return with_stack(kBigStack, body);
  } catch (const Failure& e) {
    err << "error: " << e.what() << "\n";
    return e.code;
  } catch (const Unreadable& e) {
    err << "error: " << e.what() << "\n";
    return kParseError;
  } catch (const ParseError& e) {
    std::string source;
    try {
      source = read_file(path);
    } catch (const Unreadable&) {
    }
    for (const auto& d : e.diagnostics()) err << path << ":" << d.render(source) << "\n";
    return kParseError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

numerics::FpFormat format_of(const std::string& name) {
  try {
    return numerics::FpFormat::parse(name);
  } catch (const std::invalid_argument& e) {
    throw Failure(kParseError, e.what());
  }
}

const ReportRow& entry_row(const CheckOutcome& checked, const std::string& entry) {
  for (const auto& r : checked.report.rows)
    if (r.decl == entry) {
      if (!r.ok) throw Failure(kMismatch, entry + " does not type-check: " + r.status);
      return r;
    }
  throw Failure(kMismatch, "no declaration named " + entry);
}

const DeclCheck& entry_check(const CheckOutcome& checked, const std::string& entry) {
  entry_row(checked, entry);
  for (const auto& c : checked.checks)
    if (c.name == entry) return c;
  throw std::logic_error("report and checks disagree on " + entry);
}

Rational parse_number(const std::string& text) {
  if (text.rfind("2^", 0) == 0) {
    try {
      std::size_t used = 0;
      long k = std::stol(text.substr(2), &used);
      if (used == text.size() - 2) return numerics::ldexp(Rational(1), k);
    } catch (const std::exception&) {
    }
  } else if (auto q = numerics::parse_decimal(text)) {
    return *q;
  }
  throw Failure(kParseError, "not a number: '" + text + "'");
}

TermPtr build_arg(const Ty& t, const std::vector<std::string>& args, std::size_t& next, const std::string& where) {
  switch (t.kind()) {
    case TyKind::Unit: return term::unit();
    case TyKind::Num: {
      if (next >= args.size()) throw Failure(kMismatch, where + " needs more arguments than were given");
      return term::constant(numerics::Real(parse_number(args[next++])));
    }
    case TyKind::Monad:
      if (t.inner().kind() == TyKind::Num) return term::rnd(build_arg(t.inner(), args, next, where));
      return term::ret(build_arg(t.inner(), args, next, where));
    case TyKind::Bang: return term::box(build_arg(t.inner(), args, next, where), t.grade());
    case TyKind::Tensor: {
      TermPtr a = build_arg(t.lhs(), args, next, where);
      return term::tensor_pair(a, build_arg(t.rhs(), args, next, where));
    }
    case TyKind::With: {
      TermPtr a = build_arg(t.lhs(), args, next, where);
      return term::with_pair(a, build_arg(t.rhs(), args, next, where));
    }
    case TyKind::Sum: return term::inl(build_arg(t.lhs(), args, next, where), t.rhs(), true);
    case TyKind::Lolli: break;
  }
  throw Failure(kMismatch, where + " takes a function argument, which cannot be given on the command line");
}

void print_value(std::ostream& out, const eval::Value& v) {
  out << v.to_string() << "\n";
  std::vector<const eval::Value*> stack{&v};
  std::vector<const numerics::Real*> leaves;
  while (!stack.empty()) {
    const eval::Value* x = stack.back();
    stack.pop_back();
    switch (x->kind()) {
      case eval::Value::Kind::Num: leaves.push_back(&x->number()); break;
      case eval::Value::Kind::WithPair:
      case eval::Value::Kind::TensorPair:
        stack.push_back(&x->second());
        stack.push_back(&x->first());
        break;
      case eval::Value::Kind::Inl:
      case eval::Value::Kind::Inr:
      case eval::Value::Kind::Box:
      case eval::Value::Kind::Ret: stack.push_back(&x->first()); break;
      default: break;
    }
  }
  for (const auto* k : leaves) out << "  " << k->to_string() << " ~ " << k->to_decimal(20) << "\n";
}

}  // namespace

Ty result_after(const Ty& fn, std::size_t params) {
  Ty t = fn;
  for (std::size_t i = 0; i < params; ++i) {
    if (t.kind() != TyKind::Lolli) throw std::logic_error("fewer arrows than parameters");
    t = t.rhs();
  }
  return t;
}

std::vector<TermPtr> argument_terms(const Decl& d, const std::vector<std::string>& args,
                                    const numerics::FpFormat&) {
  std::vector<TermPtr> out;
  std::size_t next = 0;
  for (const auto& p : d.params) out.push_back(build_arg(p.ty, args, next, d.name));
  if (next != args.size())
    throw Failure(kMismatch, d.name + " takes " + std::to_string(next) + " numeric arguments, got " +
                                 std::to_string(args.size()));
  return out;
}

std::pair<Rational, Rational> parse_range(const std::string& text) {
  auto colon = text.find(':');
  if (colon == std::string::npos) throw Failure(kParseError, "range must be LO:HI, got '" + text + "'");
  Rational lo = parse_number(text.substr(0, colon));
  Rational hi = parse_number(text.substr(colon + 1));
  if (lo <= 0 || hi < lo) throw Failure(kParseError, "range needs 0 < LO <= HI");
  return {lo, hi};
}

int cmd_check(const CheckOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, o.path, [&] {
    numerics::FpFormat fmt = format_of(o.format);
    CheckOutcome checked = check_program(load(o.path, fmt), fmt);
    out << (o.json ? render_json(checked.report, o.timing) : render_text(checked.report));
    return checked.report.ok() ? kOk : kMismatch;
  });
}

int cmd_eval(const EvalOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, o.path, [&] {
    numerics::FpFormat fmt = format_of(o.format);
    auto mode = eval::parse_mode(o.mode);
    if (!mode) throw Failure(kParseError, "mode must be ideal, fp or fp-exceptional, got '" + o.mode + "'");
    SourceProgram program = load(o.path, fmt);
    CheckOutcome checked = check_program(program, fmt);
    entry_row(checked, o.entry);
    const Decl* d = checked.env.decl(o.entry);
    std::vector<TermPtr> args = argument_terms(*d, o.args, fmt);
    try {
      print_value(out, eval::eval(*d, checked.env, args, *mode, fmt));
    } catch (const eval::NonRepresentable& e) {
      throw Failure(kMismatch, std::string("fp evaluation aborted: ") + e.what());
    }
    return kOk;
  });
}

int cmd_validate(const ValidateOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, o.path, [&] {
    ValidationConfig cfg;
    cfg.fmt = format_of(o.format);
    if (o.trials < 1) throw Failure(kParseError, "trials must be at least 1");
    cfg.trials = o.trials;
    cfg.seed = o.seed;
    cfg.max_bits = o.max_bits;
    if (o.range) std::tie(cfg.lo, cfg.hi) = parse_range(*o.range);
    if (o.override_bound) cfg.override_bound = eval_grade_expr(parse_grade_expr(*o.override_bound), cfg.fmt);
    CheckOutcome checked = check_program(load(o.path, cfg.fmt), cfg.fmt);
    const DeclCheck& c = entry_check(checked, o.entry);
    Ty result = result_after(*c.inferred, checked.env.decl(o.entry)->params.size());
    ValidationSummary s;
    try {
      s = validate(checked.env, o.entry, result, cfg);
    } catch (const std::invalid_argument& e) {
      throw Failure(kMismatch, e.what());
    }
    out << render_summary(o.entry, cfg, s);
    return s.ok() ? kOk : kMismatch;
  });
}

int cmd_bench(const BenchOptions& o, std::ostream& out, std::ostream& err) {
  return guarded(err, o.golden.value_or(""), [&] {
    numerics::FpFormat fmt = format_of(o.format);
    std::vector<Benchmark> suite;
    try {
      suite = benchmarks(o.suite);
    } catch (const std::invalid_argument& e) {
      throw Failure(kParseError, e.what());
    }
    std::vector<GoldenRow> golden;
    try {
      golden = o.golden ? parse_golden(read_file(*o.golden)) : default_golden();
    } catch (const std::invalid_argument& e) {
      throw Failure(kParseError, e.what());
    }
    std::vector<BenchRow> rows;
    for (const auto& b : suite) rows.push_back(run_benchmark(b, golden, fmt));
    out << (o.json ? render_bench_json(rows, o.timing) : render_bench_text(rows));
    bool ok = true;
    for (const auto& r : rows)
      if (!r.matches()) {
        ok = false;
        err << r.bench.name << ": expected " << (r.golden ? r.golden->bound : "-") << ", got "
            << (r.row.ok ? r.row.rel_error_bound : r.row.status) << "\n";
      }
    return ok ? kOk : kMismatch;
  });
}

}  // namespace numfuzz::driver
