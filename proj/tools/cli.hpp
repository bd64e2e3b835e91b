#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace scatsyn::cli {

enum ExitCode : int {
  ok = 0,
  not_verified = 1,
  parse_error = 2,
  condition_failure = 3,
  solver_failure = 4,
};

/// Full command-line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace scatsyn::cli
