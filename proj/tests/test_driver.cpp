#include <doctest.h>
#include <mpfr.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "numfuzz/driver/bench.hpp"
#include "numfuzz/driver/commands.hpp"
#include "numfuzz/driver/generate.hpp"
#include "numfuzz/driver/programs.hpp"
#include "numfuzz/driver/report.hpp"
#include "numfuzz/numerics/rational.hpp"
#include "numfuzz/syntax/parser.hpp"
#include "numfuzz/util/stack.hpp"
#include "support.hpp"

using namespace numfuzz;
using namespace numfuzz::driver;

namespace {

const std::string kPrograms = NUMFUZZ_SOURCE_DIR "/programs/";

Grade eps() { return numerics::unit_roundoff(numerics::FpFormat::binary64()); }

const ReportRow& row(const Report& r, const std::string& name) {
  for (const auto& x : r.rows)
    if (x.decl == name) return x;
  FAIL("no row " << name);
  throw 0;
}

Report check_text(const std::string& text) {
  return with_stack(kBigStack, [&] { return check_program(parse_program(text)).report; });
}

std::string temp_file(const std::string& name, const std::string& text) {
  std::string path = "/tmp/numfuzz_test_" + name;
  std::ofstream(path) << text;
  return path;
}

struct Run {
  int code;
  std::string out, err;
};

template <typename Cmd, typename Opts>
Run run(Cmd cmd, const Opts& o) {
  std::ostringstream out, err;
  int code = cmd(o, out, err);
  return {code, out.str(), err.str()};
}

Rational mpfr_round_up(const Rational& x) {
  mpfr_t t;
  mpfr_init2(t, 53);
  mpfr_set_q(t, x.get_mpq_t(), MPFR_RNDU);
  mpz_class m;
  long e = mpfr_get_z_2exp(m.get_mpz_t(), t);
  mpfr_clear(t);
  return numerics::ldexp(Rational(m), e);
}

}  // namespace

TEST_CASE("generated programs") {
  Report sum2 = check_text(gen::sum_text(2));
  CHECK(row(sum2, "Sum2").grade == eps());

  Report h50 = check_text(gen::horner_text(50));
  CHECK(row(h50, "Horner50").grade == Grade(50L) * eps());
  CHECK(row(h50, "Horner50").rel_error_bound == "1.11e-14");

  Report mm4 = check_text(gen::matmul_text(4));
  CHECK(row(mm4, "MatrixMultiply4").grade == Grade(7L) * eps());
  CHECK(row(mm4, "MatrixMultiply4").rel_error_bound == "1.55e-15");

  Report h1 = check_text(gen::horner_text(1));
  CHECK(row(h1, "Horner1").grade == eps());

  Report sum5 = check_text(gen::sum_text(5));
  CHECK(row(sum5, "Sum5").grade == Grade(4L) * eps());

  Report p3 = check_text(gen::poly_text(3));
  CHECK(row(p3, "Poly3").ok);
  CHECK(gen::gen_horner(3).find("Horner3") != nullptr);
}

TEST_CASE("prelude rows") {
  Run r = run(cmd_check, CheckOptions{kPrograms + "prelude.nfz", "binary64", false, true});
  CHECK(r.code == kOk);
  Report rep = check_text(std::string(prelude_source()));
  REQUIRE(rep.rows.size() == 4);
  for (const auto& x : rep.rows) {
    CHECK(x.ok);
    CHECK(x.rel_error_bound == "2.22e-16");
  }
}

TEST_CASE("check exit codes") {
  Run ok = run(cmd_check, CheckOptions{kPrograms + "horner.nfz"});
  CHECK(ok.code == kOk);
  CHECK(ok.out.find("4.44e-16") != std::string::npos);

  std::string bad = temp_file("ma_eps.nfz",
                              "function MA (x: num) (y: num) (z: num) : M[eps]num {\n"
                              "  s = mulfp (x,y);\n  let a = s;\n  addfp (|a,z|)\n}\n");
  Run mismatch = run(cmd_check, CheckOptions{bad, "binary64", true, false});
  CHECK(mismatch.code == kMismatch);
  auto j = nlohmann::json::parse(mismatch.out);
  REQUIRE(j.size() == 1);
  CHECK(j[0]["status"].get<std::string>().rfind("error: ", 0) == 0);

  Run parse = run(cmd_check, CheckOptions{temp_file("broken.nfz", "function f (x: num) : num { x")});
  CHECK(parse.code == kParseError);
  CHECK(parse.err.find("^") != std::string::npos);

  CHECK(run(cmd_check, CheckOptions{"/nonexistent/file.nfz"}).code == kParseError);
  CHECK(run(cmd_check, CheckOptions{kPrograms + "horner.nfz", "binary7"}).code == kParseError);
}

TEST_CASE("JSON reports are reproducible") {
  CheckOptions o{kPrograms + "horner.nfz", "binary64", true, false};
  Run a = run(cmd_check, o), b = run(cmd_check, o);
  CHECK(a.out == b.out);
  auto j = nlohmann::ordered_json::parse(a.out);
  std::vector<std::string> keys;
  for (auto it = j[0].begin(); it != j[0].end(); ++it) keys.push_back(it.key());
  CHECK(keys == std::vector<std::string>{"decl", "declared_type", "inferred_type", "grade_rational", "grade_decimal",
                                         "rel_error_bound", "status", "time_ms"});
  CHECK(j[1]["grade_rational"] == "1/2251799813685248");

  BenchOptions bo;
  bo.suite = "cond";
  bo.json = true;
  bo.timing = false;
  CHECK(run(cmd_bench, bo).out == run(cmd_bench, bo).out);
}

TEST_CASE("eval command") {
  EvalOptions o{kPrograms + "ma.nfz", "FMA", "ideal", {"0.1", "0.1", "0.1"}};
  Run ideal = run(cmd_eval, o);
  CHECK(ideal.code == kOk);
  CHECK(ideal.out.rfind("ret 11/100\n", 0) == 0);

  o.mode = "fp";
  Run fp = run(cmd_eval, o);
  CHECK(fp.code == kOk);
  CHECK(fp.out.rfind("ret " + mpfr_round_up(Rational(11, 100)).get_str() + "\n", 0) == 0);

  o.args.pop_back();
  CHECK(run(cmd_eval, o).code == kMismatch);
  o.args = {"0.1", "x", "0.1"};
  CHECK(run(cmd_eval, o).code == kParseError);
  o.args = {"0.1", "0.1", "0.1"};
  o.entry = "nothing";
  CHECK(run(cmd_eval, o).code == kMismatch);
  o.entry = "FMA";
  o.mode = "sideways";
  CHECK(run(cmd_eval, o).code == kParseError);

  EvalOptions box{kPrograms + "pow.nfz", "pow4", "ideal", {"3"}};
  Run p = run(cmd_eval, box);
  CHECK(p.out.rfind("ret 81\n", 0) == 0);
}

TEST_CASE("eval at the edges of the format") {
  EvalOptions o{kPrograms + "square.nfz", "square", "fp-exceptional", {"1e200"}};
  Run over = run(cmd_eval, o);
  CHECK(over.code == kOk);
  CHECK(over.out == "err\n");
  o.mode = "fp";
  Run abort = run(cmd_eval, o);
  CHECK(abort.code == kMismatch);
  CHECK(abort.err.find("aborted") != std::string::npos);
  o.mode = "ideal";
  CHECK(run(cmd_eval, o).out.rfind("ret 1", 0) == 0);

  o = {kPrograms + "square.nfz", "square", "fp-exceptional", {"1e-200"}};
  CHECK(run(cmd_eval, o).out == "err\n");
}

TEST_CASE("validation") {
  ValidateOptions o;
  o.path = kPrograms + "horner.nfz";
  o.entry = "Horner2";
  o.seed = 42;
  Run r = run(cmd_validate, o);
  CHECK(r.code == kOk);
  CHECK(r.out.find("certified     1000\n") != std::string::npos);
  CHECK(r.out.find("violations    0\n") != std::string::npos);
  CHECK(run(cmd_validate, o).out == r.out);

  o.override_bound = "eps";
  Run halved = run(cmd_validate, o);
  CHECK(halved.code == kMismatch);
  CHECK(halved.out.find("violations    0\n") == std::string::npos);

  ValidateOptions p;
  p.path = kPrograms + "pow.nfz";
  p.entry = "pow4";
  p.trials = 200;
  CHECK(run(cmd_validate, p).code == kOk);
  p.entry = "pow2";
  CHECK(run(cmd_validate, p).code == kMismatch);

  ValidateOptions c;
  c.path = kPrograms + "squareRoot3.nfz";
  c.entry = "squareRoot3";
  c.trials = 300;
  c.range = "2^-20:2^-10";
  Run small = run(cmd_validate, c);
  CHECK(small.code == kOk);
}

TEST_CASE("validation internals") {
  auto [lo, hi] = parse_range("2^-8:2^8");
  CHECK(lo == Rational(1, 256));
  CHECK(hi == Rational(256));
  CHECK(parse_range("0.5:3").second == Rational(3));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 1000; ++i) {
    Rational x = sample_input(rng, lo, hi, numerics::FpFormat::binary64());
    CHECK(x >= lo);
    CHECK(x <= hi);
    CHECK(mpfr_round_up(x) == x);
  }

  GlobalEnv env = testsupport::load(std::string(*program_file("horner.nfz")));
  ValidationConfig cfg;
  cfg.trials = 50;
  cfg.seed = 3;
  Ty result = parse_type("M[2*eps]num");
  ValidationSummary a = validate(env, "Horner2", result, cfg);
  ValidationSummary b = validate(env, "Horner2", result, cfg);
  CHECK(a.certified == 50);
  CHECK(a.max_ratio == b.max_ratio);
  CHECK(a.max_ratio <= 1);
  CHECK_THROWS_AS(validate(env, "Horner2", parse_type("num"), cfg), std::invalid_argument);
}

TEST_CASE("golden table") {
  auto rows = parse_golden("name,bound,ops\nA,1.00e-16,4\nB,2.00e-16,\n");
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].ops == 4);
  CHECK_FALSE(rows[1].ops.has_value());
  CHECK_THROWS_AS(parse_golden("name,bound,ops\nonly\n"), std::invalid_argument);

  auto golden = default_golden();
  CHECK(golden.size() == 20);

  Run t2 = run(cmd_bench, BenchOptions{"table2"});
  CHECK(t2.code == kOk);
  CHECK(t2.out.find("Horner20") != std::string::npos);

  std::string wrong = temp_file("golden.csv", "name,bound,ops\nhypot,5.56e-16,4\n");
  BenchOptions bo{"table2", wrong};
  Run mismatch = run(cmd_bench, bo);
  CHECK(mismatch.code == kMismatch);
  CHECK(mismatch.err.find("hypot: expected 5.56e-16, got 5.55e-16") != std::string::npos);
  CHECK(run(cmd_bench, BenchOptions{"table9"}).code == kParseError);
}
