#pragma once

#include <ostream>

namespace stratkit::cli {

enum ExitCode { kOk = 0, kNegative = 1, kUsage = 2 };

/// Parses argv and runs one subcommand, writing the report to `out` and
/// diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace stratkit::cli
