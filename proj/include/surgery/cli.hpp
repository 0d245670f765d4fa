#pragma once

#include <ostream>

namespace surgery {

/// Exit codes of the `surgery` tool.
enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitParse = 2,
  kExitNotIdentifiable = 3,
  kExitNoSupport = 4,
};

/// Entry point of the command-line tool, with injectable streams for tests.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace surgery
