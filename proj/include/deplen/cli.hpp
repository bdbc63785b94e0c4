#pragma once

#include <string>
#include <vector>

namespace deplen {

/// Exit codes of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitData = 2 };

/// Runs the `deplen` command line. args[0] is the program name.
int run_cli(const std::vector<std::string>& args);

}  // namespace deplen
