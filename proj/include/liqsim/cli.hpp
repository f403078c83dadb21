#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace liqsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitToleranceFailure = 1;
inline constexpr int kExitUsage = 2;

/// Runs the command line with args[0] as the program name. Normal output
/// goes to `out`, diagnostics and summaries to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace liqsim::cli
