#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace unroll::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kUsageOrInput = 1;  // parse, type, validation, IO
inline constexpr int kEvaluation = 2;
inline constexpr int kMismatch = 3;
inline constexpr int kTimeout = 4;

/// Runs the command line `args` (without the program name). Everything the
/// process would print goes to `out` and `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace unroll::cli
