#pragma once

#include <string_view>

namespace numfuzz {

/// Text of programs/prelude.nfz, compiled in.
std::string_view prelude_source();

}  // namespace numfuzz
