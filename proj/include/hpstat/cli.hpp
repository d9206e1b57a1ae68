#pragma once

#include <iosfwd>

namespace hpstat {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Entry point of the `hpstat` executable, with injectable streams.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hpstat
