#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace tlq::cli {

/// Runs the command line `args` (without the program name). Returns the process exit code:
/// 0 success, 2 input error, 3 model invariant violation, 4 numerical precondition violation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace tlq::cli
