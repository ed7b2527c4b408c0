#ifndef DICE_COMMANDS_HPP
#define DICE_COMMANDS_HPP

#include <iosfwd>
#include <string>

#include "dice/config.hpp"

namespace dice {

/// Exit codes shared by the CLI and run_command.
enum ExitCode : int {
  exit_ok = 0,
  exit_usage = 1,       ///< usage or config error
  exit_infeasible = 2,  ///< infeasible simulation
  exit_verify_failed = 3,
  exit_not_converged = 4 ///< optimizer finished without converging
};

/// Executes one command (simulate, optimize, scc, aux, check-grad, verify,
/// plot-data) against a parsed config. Writes human-readable progress to
/// `out`, diagnostics to `err`, and result files per the config.
int run_command(const std::string& command, const ScenarioConfig& config,
                std::ostream& out, std::ostream& err);

} // namespace dice

#endif
