#pragma once

#include <iosfwd>

namespace sepph::cli {

/// Exit codes of every subcommand.
enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kParseError = 2,     // malformed input file or command line
  kMissingLabels = 3,  // supervised metric on unlabelled data
  kShapeMismatch = 4,  // snapshots of one run disagree in shape
};

/// Parses argv, runs the subcommand and maps errors to exit codes.
/// Reports go to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace sepph::cli
