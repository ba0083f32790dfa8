#pragma once

#include <iosfwd>

namespace wattmark::report {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 2,
  kExitTrialFailures = 3,
  kExitAnalysis = 4,
};

/// `wattmark <run|analyze|plotdata|replay-validate> [flags]`.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run_cli(int argc, const char* const* argv);

}  // namespace wattmark::report
