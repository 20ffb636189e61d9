// Loading helpers shared by the evaluation and driver tests.
#pragma once

#include <doctest.h>

#include <fstream>
#include <sstream>
#include <string>

#include "numfuzz/driver/prelude.hpp"
#include "numfuzz/syntax/parser.hpp"
#include "numfuzz/typing/infer.hpp"

namespace numfuzz::testsupport {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE_MESSAGE(in.good(), path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Prelude plus `text`, every declaration required to check.
inline GlobalEnv load(const std::string& text) {
  GlobalEnv env;
  for (const auto& c : infer_program(parse_program(prelude_source()), env)) REQUIRE(c.ok());
  for (const auto& c : infer_program(parse_program(text), env))
    REQUIRE_MESSAGE(c.ok(), c.name << ": " << (c.error ? c.error->what() : ""));
  return env;
}

}  // namespace numfuzz::testsupport
