#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace numfuzz {

/// A file of programs/, compiled in.
struct ProgramFile {
  std::string_view name;
  std::string_view text;
};

const std::vector<ProgramFile>& program_files();
/// Text of programs/<name>, e.g. "hypot.nfz" or "golden.csv".
std::optional<std::string_view> program_file(std::string_view name);

}  // namespace numfuzz
