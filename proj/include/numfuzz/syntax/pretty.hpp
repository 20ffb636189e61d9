#pragma once

#include <string>

#include "numfuzz/syntax/ast.hpp"

namespace numfuzz {

/// Grades print as multiples of eps when that is short ("eps", "2*eps",
/// "2.5*eps"), otherwise as an exact decimal ("0.5", "2"). Only grades with
/// no terminating decimal expansion lose precision (3 significant digits).
std::string pretty(const Grade& g, const numerics::FpFormat& fmt = numerics::FpFormat::binary64());
std::string pretty(const Ty& t, const numerics::FpFormat& fmt = numerics::FpFormat::binary64());
/// Single-line rendering that parses back to an equal term.
std::string pretty(const Term& t, const numerics::FpFormat& fmt = numerics::FpFormat::binary64());
std::string pretty(const Decl& d, const numerics::FpFormat& fmt = numerics::FpFormat::binary64());
std::string pretty(const SourceProgram& p, const numerics::FpFormat& fmt = numerics::FpFormat::binary64());

}  // namespace numfuzz
