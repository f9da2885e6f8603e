#pragma once

// The `check` command line: load a scenario, run suites, print reports.

#include <ostream>
#include <string>
#include <vector>

namespace tbpn {

enum ExitCode : int {
    kExitOk = 0,
    kExitCheckFailed = 1,
    kExitUsage = 2,
    kExitLoad = 3,
    kExitNumeric = 4,
};

/// Runs the command line given as argv-style words (without the program
/// name); the text report goes to `out`, diagnostics to `err`.
int runCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tbpn
