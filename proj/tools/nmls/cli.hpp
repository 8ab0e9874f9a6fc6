#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace nmls::cli {

// Process exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitVerdict = 4;

/// Runs the command line in `args` (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace nmls::cli
