#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace qlocality::cli {

// Exit codes shared by every subcommand.
enum ExitCode : int {
    kLocal = 0,      // local / separable / certified / success
    kNonlocal = 1,   // nonlocal / entangled / not certified
    kUsage = 2,      // bad flags, unknown family, invalid input file
    kNumeric = 3,    // solver failure
};

// Runs the command line `args` (args[0] is the program name). Human-readable output goes to
// `out`, diagnostics to `err`; JSON reports go to the --out path when one is given.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace qlocality::cli
