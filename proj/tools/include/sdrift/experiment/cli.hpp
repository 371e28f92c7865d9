#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace sdrift::experiment {

enum ExitCode : int { kOk = 0, kConfigError = 1, kNumericalError = 2 };

/// Entry point of the `sdrift` tool. `args` excludes the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sdrift::experiment
