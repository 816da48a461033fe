#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace apv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDataError = 1;
inline constexpr int kExitUsage = 2;

/// Runs one command line (args excludes the program name). Writes a JSON
/// status line to `out` on success and a JSON error report to `err` (and to
/// error.json in the output directory when it is writable) on failure.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace apv::cli
