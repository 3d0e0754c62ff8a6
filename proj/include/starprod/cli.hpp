#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace starprod {

/// Exit codes of the command-line surface.
inline constexpr int kExitPass = 0;
inline constexpr int kExitVerdictFail = 1;
inline constexpr int kExitUsage = 2;

/// Runs one CLI invocation (without the program name). Structured text
/// goes to out, diagnostics to err; when --out is given the
/// machine-readable report is also written there. Returns kExitPass
/// when every verdict passes, kExitVerdictFail when a verdict fails,
/// and kExitUsage for unusable flags or inputs.
int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace starprod
