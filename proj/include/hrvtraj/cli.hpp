#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace hrvtraj::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kComputationError = 3 };

/// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace hrvtraj::cli
