#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>

namespace fkqsd {

/// Process exit codes.
enum ExitCode : int {
  exit_ok = 0,
  exit_error = 1,
  exit_validation = 2,
  exit_extinction = 3,
  exit_nonconvergence = 4,
};

struct RunOptions {
  /// simulate, lambda, qsd, convergence, lyapunov, sampler-test or oracle.
  std::string subcommand;
  std::string config_path;
  std::optional<std::uint64_t> seed;
  unsigned workers = 1;
  std::optional<std::string> out;
};

/// Runs one subcommand, writing CSVs and summary.txt into the output directory.
/// Failures print a single `error kind=... reason="..."` line to `err`
/// (and to error.txt when the output directory is known).
int run(const RunOptions& options, std::ostream& err);

/// Parses argv and calls run().
int run_cli(int argc, char** argv);

}  // namespace fkqsd
