#include "numfuzz/driver/report.hpp"

#include <chrono>
#include <iomanip>
#include <json.hpp>
#include <sstream>
#include <unordered_set>

#include "numfuzz/driver/prelude.hpp"
#include "numfuzz/numerics/relprec.hpp"
#include "numfuzz/syntax/parser.hpp"
#include "numfuzz/syntax/pretty.hpp"

namespace numfuzz::driver {

bool Report::ok() const {
  for (const auto& r : rows)
    if (!r.ok) return false;
  return true;
}

std::string bound_text(const Grade& g) {
  try {
    return numerics::rp_to_rel(g).text;
  } catch (const numerics::AlphaTooLarge&) {
    return "overflow";
  }
}

namespace {

ReportRow make_row(const DeclCheck& c, const std::string& source, const numerics::FpFormat& fmt) {
  ReportRow row;
  row.decl = c.name;
  row.declared_type = pretty(c.declared, fmt);
  if (c.inferred) row.inferred_type = pretty(*c.inferred, fmt);
  row.ok = c.ok();
  if (c.ok()) {
    row.grade = c.grade;
    row.grade_rational = c.grade.to_rational_string();
    row.grade_decimal = numerics::grade_decimal(c.grade);
    row.rel_error_bound = bound_text(c.grade);
    row.status = "ok";
  } else {
    const TypeError& e = *c.error;
    Diagnostic d{Severity::Error, std::string(to_string(e.kind())) + ": " + e.what(), e.span()};
    row.status = "error: " + d.render();
    row.detail = d.render(source);
  }
  return row;
}

}  // namespace

CheckOutcome check_program(const SourceProgram& program, const numerics::FpFormat& fmt) {
  CheckOutcome out;
  std::unordered_set<std::string> own;
  for (const auto& d : program.decls) own.insert(d.name);
  SourceProgram prelude = parse_program(prelude_source(), fmt);
  for (const auto& d : prelude.decls) {
    if (own.count(d.name)) continue;
    DeclCheck c = check_decl(d, out.env, fmt);
    if (!c.ok()) throw std::logic_error("prelude declaration " + d.name + " does not check");
    out.env.add(d);
  }
  for (const auto& d : program.decls) {
    auto start = std::chrono::steady_clock::now();
    DeclCheck c = check_decl(d, out.env, fmt);
    double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    if (c.ok()) out.env.add(d);
    else out.env.add_failed(d.name);
    ReportRow row = make_row(c, program.text, fmt);
    row.time_ms = ms;
    out.report.rows.push_back(std::move(row));
    out.checks.push_back(std::move(c));
  }
  return out;
}

namespace {

std::string clip(const std::string& s, std::size_t n = 100) {
  return s.size() <= n ? s : s.substr(0, n) + " ...";
}

}  // namespace

std::string render_text(const Report& r) {
  std::ostringstream os;
  for (const auto& row : r.rows) {
    os << row.decl << ": " << (row.ok ? "ok" : "error") << "\n";
    os << "  declared  " << clip(row.declared_type) << "\n";
    if (!row.inferred_type.empty()) os << "  inferred  " << clip(row.inferred_type) << "\n";
    if (row.ok) {
      os << "  grade     " << row.grade_rational << " (" << row.grade_decimal << ")\n";
      os << "  bound     " << row.rel_error_bound << "\n";
    } else {
      std::istringstream lines(row.detail);
      for (std::string line; std::getline(lines, line);) os << "  " << line << "\n";
    }
    os << "  time      " << std::fixed << std::setprecision(2) << row.time_ms << " ms\n";
    os.unsetf(std::ios::fixed);
  }
  return os.str();
}

std::string render_json(const Report& r, bool timing) {
  auto rows = nlohmann::ordered_json::array();
  for (const auto& row : r.rows) {
    nlohmann::ordered_json j;
    j["decl"] = row.decl;
    j["declared_type"] = row.declared_type;
    j["inferred_type"] = row.inferred_type;
    j["grade_rational"] = row.grade_rational;
    j["grade_decimal"] = row.grade_decimal;
    j["rel_error_bound"] = row.rel_error_bound;
    j["status"] = row.status;
    j["time_ms"] = timing ? row.time_ms : 0.0;
    rows.push_back(std::move(j));
  }
  return rows.dump(2) + "\n";
}

}  // namespace numfuzz::driver
