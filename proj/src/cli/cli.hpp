#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace stratalloc::cli {

/// Runs one command. `args` excludes the program name. Returns the process
/// exit code: 0 success, 2 invalid input, 3 infeasible or failed computation.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace stratalloc::cli
