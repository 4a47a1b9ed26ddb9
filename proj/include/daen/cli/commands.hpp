#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace daen::cli {

enum ExitCode : int {
    kExitOk = 0,
    kExitInputError = 2,
    kExitInsufficientData = 3,
    kExitInternalError = 4,
};

// Runs one CLI invocation; `args` excludes the program name. Never throws.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace daen::cli
