#pragma once

#include <string>
#include <vector>

#include "numfuzz/typing/infer.hpp"

namespace numfuzz::driver {

/// One checked declaration. The string fields are what the text and JSON
/// renderings show; numeric fields are empty for rejected declarations.
struct ReportRow {
  std::string decl;
  std::string declared_type;
  std::string inferred_type;
  std::string grade_rational;
  std::string grade_decimal;
  std::string rel_error_bound;
  std::string status;  // "ok" or "error: <diagnostic>"
  double time_ms = 0;

  bool ok = false;
  Grade grade;
  /// Diagnostic with the source line and a caret, for text output.
  std::string detail;
};

struct Report {
  std::vector<ReportRow> rows;
  bool ok() const;
};

struct CheckOutcome {
  Report report;
  GlobalEnv env;
  std::vector<DeclCheck> checks;
};

/// Loads the prelude, minus declarations the program redefines, then checks
/// every declaration of `program` in order. Rows cover the program only.
CheckOutcome check_program(const SourceProgram& program,
                           const numerics::FpFormat& fmt = numerics::FpFormat::binary64());

/// e^g - 1 at 3 significant digits, "inf", or "overflow" when it exceeds
/// the binary64 range.
std::string bound_text(const Grade& g);

std::string render_text(const Report& r);
/// Array of objects with keys decl, declared_type, inferred_type,
/// grade_rational, grade_decimal, rel_error_bound, status, time_ms. With
/// `timing` off every time_ms is 0, making the output reproducible.
std::string render_json(const Report& r, bool timing = true);

}  // namespace numfuzz::driver
