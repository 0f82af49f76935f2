#pragma once

namespace twoatom {

/// Exit codes of the command-line driver.
enum ExitCode : int {
  exit_ok = 0,
  exit_failure = 1,
  exit_config = 2,
  exit_convergence = 3,
  exit_dimension = 4,
};

/// Entry point of the `twoatom` tool; returns an ExitCode.
int run_cli(int argc, char** argv);

}  // namespace twoatom
