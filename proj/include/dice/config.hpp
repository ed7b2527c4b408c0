#ifndef DICE_CONFIG_HPP
#define DICE_CONFIG_HPP

#include <filesystem>
#include <string>

#include "dice/csv_io.hpp"
#include "dice/optimizer.hpp"

namespace dice {

/// A full scenario description parsed from a JSON config file. See the
/// README for the schema; sections are "scenario", "params", "optimizer",
/// "output", "verify" and "check_grad".
struct ScenarioConfig {
  int n_periods = 60;
  State initial; ///< required; the model defines no default initial state

  Overrides overrides;

  enum class ControlsSource { defaults, inline_arrays, csv };
  ControlsSource controls_source = ControlsSource::defaults;
  ControlPath inline_controls;
  std::filesystem::path controls_csv;

  OptimizerConfig optimizer;

  std::filesystem::path output_path = "dice_output.csv";
  std::filesystem::path plot_prefix = "plot_";

  std::filesystem::path reference_path; ///< empty unless verify is configured
  VerifySpec verify;

  double check_grad_step = 1e-6;
};

/// Parses and validates a config file. Parse errors carry the line number;
/// validation errors name the offending field.
ScenarioConfig parse_config(const std::filesystem::path& path);

/// Everything derived from a config that commands operate on.
struct Scenario {
  ModelParams params;
  ExogenousPath exo;
  BoundSchedule schedule;
  State initial;
  ControlPath controls; ///< resolved from the configured source
};

Scenario build_scenario(const ScenarioConfig& config);

} // namespace dice

#endif
