#pragma once

#include <ostream>

namespace skewgp::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kConfigError = 2,
  kNumericalFailure = 3,
  kIoFailure = 4,
};

/// Parses argv, runs one subcommand and returns its exit status. Artifacts go
/// to --out or, without it, to `out`; summaries and diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace skewgp::cli
