#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stratinfer::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;

/// Runs one command line (without the program name) and returns the exit status.
/// Reports go to files named by --out, or to `out` when --out is absent.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stratinfer::cli
