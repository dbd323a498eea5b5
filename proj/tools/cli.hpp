#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mubforge::cli {

enum ExitCode : int { kOk = 0, kFailed = 1, kUsage = 2 };

/// Runs one command line (args[0] is the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace mubforge::cli
