#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "numfuzz/driver/report.hpp"

namespace numfuzz::driver {

struct Benchmark {
  std::string name;
  std::string suite;  // table2, large or cond
  std::string text;   // program source; `name` is the declaration reported
};

/// "table2", "large", "cond" or "all". Throws std::invalid_argument otherwise.
std::vector<Benchmark> benchmarks(const std::string& suite);

struct GoldenRow {
  std::string name;
  std::string bound;
  std::optional<long> ops;
};

/// `name,bound,ops` with a header line; ops may be empty.
std::vector<GoldenRow> parse_golden(std::string_view csv);
/// The table compiled in from programs/golden.csv.
std::vector<GoldenRow> default_golden();

struct BenchRow {
  Benchmark bench;
  ReportRow row;
  /// Check time of the whole program, helpers included.
  double time_ms = 0;
  std::optional<GoldenRow> golden;

  bool matches() const { return row.ok && (!golden || golden->bound == row.rel_error_bound); }
};

BenchRow run_benchmark(const Benchmark& b, const std::vector<GoldenRow>& golden,
                       const numerics::FpFormat& fmt = numerics::FpFormat::binary64());

std::string render_bench_text(const std::vector<BenchRow>& rows);
std::string render_bench_json(const std::vector<BenchRow>& rows, bool timing = true);

}  // namespace numfuzz::driver
