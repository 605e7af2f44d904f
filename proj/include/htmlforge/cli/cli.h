#pragma once

#include <iosfwd>

namespace htmlforge::cli {

/// Exit codes. Stable contract for scripts and CI.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitDomain = 3;

/// Entry point of the htmlforge binary. Human-readable output goes to
/// `out`; errors go to `err` as one JSON object {"error","message"}.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace htmlforge::cli
