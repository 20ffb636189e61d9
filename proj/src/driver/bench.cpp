#include "numfuzz/driver/bench.hpp"

#include <chrono>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <stdexcept>

#include "numfuzz/driver/generate.hpp"
#include "numfuzz/driver/programs.hpp"
#include "numfuzz/syntax/parser.hpp"
#include "numfuzz/util/stack.hpp"

namespace numfuzz::driver {

namespace {

std::string file(std::string_view name) {
  auto text = program_file(name);
  if (!text) throw std::logic_error("missing compiled-in program " + std::string(name));
  return std::string(*text);
}

void add_table2(std::vector<Benchmark>& out) {
  for (const char* name : {"hypot", "x_by_xy", "one_by_sqrtxx", "sqrt_add", "test02_sum8"})
    out.push_back({name, "table2", file(std::string(name) + ".nfz")});
  out.push_back({"Horner2", "table2", file("horner.nfz")});
  out.push_back({"Horner2_with_error", "table2", file("horner.nfz")});
  for (int n : {5, 10, 20}) out.push_back({"Horner" + std::to_string(n), "table2", gen::horner_text(n)});
}

void add_large(std::vector<Benchmark>& out) {
  out.push_back({"Horner50", "large", gen::horner_text(50)});
  out.push_back({"MatrixMultiply4", "large", gen::matmul_text(4)});
  out.push_back({"Horner75", "large", gen::horner_text(75)});
  out.push_back({"Horner100", "large", gen::horner_text(100)});
  out.push_back({"SerialSum", "large", gen::sum_text(1024, "SerialSum")});
  out.push_back({"Poly50", "large", gen::poly_text(50)});
  out.push_back({"MatrixMultiply16", "large", gen::matmul_text(16)});
  out.push_back({"MatrixMultiply64", "large", gen::matmul_text(64)});
}

void add_cond(std::vector<Benchmark>& out) {
  for (const char* name : {"squareRoot3", "squareRoot3Invalid", "PythagoreanSum", "branch_on_rounded"})
    out.push_back({name, "cond", file(std::string(name) + ".nfz")});
}

}  // namespace

std::vector<Benchmark> benchmarks(const std::string& suite) {
  std::vector<Benchmark> out;
  if (suite == "table2" || suite == "all") add_table2(out);
  if (suite == "large" || suite == "all") add_large(out);
  if (suite == "cond" || suite == "all") add_cond(out);
  if (out.empty()) throw std::invalid_argument("unknown suite '" + suite + "' (table2, large, cond or all)");
  return out;
}

std::vector<GoldenRow> parse_golden(std::string_view csv) {
  std::vector<GoldenRow> rows;
  std::istringstream in{std::string(csv)};
  std::string line;
  bool header = true;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("name,", 0) == 0) continue;
    }
    std::vector<std::string> cells;
    std::istringstream fields(line);
    for (std::string cell; std::getline(fields, cell, ',');) cells.push_back(cell);
    if (line.back() == ',') cells.emplace_back();
    if (cells.size() < 2 || cells.size() > 3 || cells[0].empty())
      throw std::invalid_argument("golden table line " + std::to_string(lineno) + ": expected name,bound,ops");
    GoldenRow row{cells[0], cells[1], std::nullopt};
    if (cells.size() == 3 && !cells[2].empty()) row.ops = std::stol(cells[2]);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<GoldenRow> default_golden() { return parse_golden(file("golden.csv")); }

BenchRow run_benchmark(const Benchmark& b, const std::vector<GoldenRow>& golden, const numerics::FpFormat& fmt) {
  BenchRow out;
  out.bench = b;
  for (const auto& g : golden)
    if (g.name == b.name) out.golden = g;
  auto start = std::chrono::steady_clock::now();
  CheckOutcome checked = with_stack(kBigStack, [&] { return check_program(parse_program(b.text, fmt), fmt); });
  out.time_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  for (const auto& r : checked.report.rows)
    if (r.decl == b.name) out.row = r;
  if (out.row.decl.empty()) throw std::logic_error("benchmark " + b.name + " has no declaration of that name");
  for (const auto& r : checked.report.rows)
    if (!r.ok && out.row.ok) {
      out.row.ok = false;
      out.row.status = "error in " + r.decl + ": " + r.status;
    }
  return out;
}

std::string render_bench_text(const std::vector<BenchRow>& rows) {
  std::ostringstream os;
  os << std::left << std::setw(20) << "benchmark" << std::setw(8) << "suite" << std::right << std::setw(8) << "ops"
     << std::setw(11) << "bound" << std::setw(11) << "expected" << std::setw(12) << "time (ms)" << "  result\n";
  for (const auto& r : rows) {
    std::string ops = r.golden && r.golden->ops ? std::to_string(*r.golden->ops) : "-";
    std::string expected = r.golden ? r.golden->bound : "-";
    std::string result = !r.row.ok ? r.row.status : !r.golden ? "reported" : r.matches() ? "match" : "MISMATCH";
    os << std::left << std::setw(20) << r.bench.name << std::setw(8) << r.bench.suite << std::right << std::setw(8)
       << ops << std::setw(11) << (r.row.ok ? r.row.rel_error_bound : "-") << std::setw(11) << expected
       << std::setw(12) << std::fixed << std::setprecision(2) << r.time_ms << "  " << result << "\n";
    os.unsetf(std::ios::fixed);
  }
  return os.str();
}

std::string render_bench_json(const std::vector<BenchRow>& rows, bool timing) {
  auto arr = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["decl"] = r.row.decl;
    j["declared_type"] = r.row.declared_type;
    j["inferred_type"] = r.row.inferred_type;
    j["grade_rational"] = r.row.grade_rational;
    j["grade_decimal"] = r.row.grade_decimal;
    j["rel_error_bound"] = r.row.rel_error_bound;
    j["status"] = r.row.status;
    j["time_ms"] = timing ? r.time_ms : 0.0;
    j["suite"] = r.bench.suite;
    j["expected_bound"] = r.golden ? nlohmann::ordered_json(r.golden->bound) : nlohmann::ordered_json(nullptr);
    j["ops"] = r.golden && r.golden->ops ? nlohmann::ordered_json(*r.golden->ops) : nlohmann::ordered_json(nullptr);
    j["match"] = r.matches();
    arr.push_back(std::move(j));
  }
  return arr.dump(2) + "\n";
}

}  // namespace numfuzz::driver
