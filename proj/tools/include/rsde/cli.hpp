#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace rsde::cli {

/// Exit statuses of the command-line tool.
inline constexpr int kOk = 0;
inline constexpr int kUsage = 1;
inline constexpr int kFailure = 2;

/// Runs one invocation. `args` excludes the program name. Data goes to `out`
/// unless a subcommand writes files; diagnostics go to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace rsde::cli
