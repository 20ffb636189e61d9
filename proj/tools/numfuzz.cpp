#include <CLI11.hpp>

#include <iostream>

#include "numfuzz/driver/commands.hpp"

using namespace numfuzz::driver;

int main(int argc, char** argv) {
  CLI::App app{"Roundoff-error bounds for numerical programs by type inference"};
  app.require_subcommand(1);

  CheckOptions check;
  auto* c = app.add_subcommand("check", "type-check a program and report error bounds");
  c->add_option("file", check.path, "program")->required();
  c->add_option("--format", check.format, "binary64, binary32 or p=<int>,emax=<int>");
  c->add_flag("--json", check.json, "JSON report");
  bool c_det = false;
  c->add_flag("--deterministic", c_det, "report time_ms as 0");

  EvalOptions ev;
  auto* e = app.add_subcommand("eval", "evaluate a declaration on decimal arguments");
  e->add_option("file", ev.path, "program")->required();
  e->add_option("--entry", ev.entry, "declaration to apply")->required();
  e->add_option("--mode", ev.mode, "ideal, fp or fp-exceptional")
      ->check(CLI::IsMember({"ideal", "fp", "fp-exceptional"}));
  e->add_option("--format", ev.format, "binary64, binary32 or p=<int>,emax=<int>");
  e->add_option("args", ev.args, "one decimal per numeric parameter leaf");

  ValidateOptions val;
  auto* v = app.add_subcommand("validate", "compare ideal and floating-point runs against the inferred bound");
  v->add_option("file", val.path, "program")->required();
  v->add_option("--entry", val.entry, "declaration to test")->required();
  v->add_option("--trials", val.trials, "number of random inputs")->check(CLI::PositiveNumber);
  v->add_option("--seed", val.seed, "RNG seed");
  v->add_option("--range", val.range, "LO:HI, decimals or 2^k (default 2^-8:2^8)");
  v->add_option("--override-bound", val.override_bound, "grade to certify against instead of the inferred one");
  v->add_option("--max-bits", val.max_bits, "largest working precision for certification");
  v->add_option("--format", val.format, "binary64, binary32 or p=<int>,emax=<int>");

  BenchOptions bench;
  auto* b = app.add_subcommand("bench", "check benchmark suites against the golden table");
  b->add_option("--suite", bench.suite, "table2, large, cond or all")
      ->check(CLI::IsMember({"table2", "large", "cond", "all"}));
  b->add_option("--golden", bench.golden, "CSV with name,bound,ops");
  b->add_flag("--json", bench.json, "JSON rows");
  bool b_det = false;
  b->add_flag("--deterministic", b_det, "report time_ms as 0");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    int rc = app.exit(err);
    return rc == 0 ? 0 : kParseError;
  }
  check.timing = !c_det;
  bench.timing = !b_det;

  if (*c) return cmd_check(check, std::cout, std::cerr);
  if (*e) return cmd_eval(ev, std::cout, std::cerr);
  if (*v) return cmd_validate(val, std::cout, std::cerr);
  return cmd_bench(bench, std::cout, std::cerr);
}
