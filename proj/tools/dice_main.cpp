#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "dice/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"DICE2013R integrated assessment model: simulation, adjoint "
               "sensitivities, welfare optimization and social cost of carbon"};
  app.require_subcommand(1);

  std::string config_path;
  std::string output_path;
  bool verbose = false;

  const std::vector<std::string> commands = {"simulate", "optimize", "scc",
                                             "aux",      "check-grad", "verify",
                                             "plot-data"};
  const std::vector<std::string> descriptions = {
      "roll the dynamics forward and write the trajectory CSV",
      "maximize welfare over the free controls; write optimized trajectory",
      "append marginal-welfare and social-cost-of-carbon columns",
      "append the auxiliary reporting columns (IE, NEO, PCC, DF, ACppm, MCA)",
      "compare the adjoint gradient against central finite differences",
      "compare the output CSV against a reference CSV under tolerances",
      "write per-series (year, value) files for external plotting"};

  for (std::size_t i = 0; i < commands.size(); ++i) {
    CLI::App* sub = app.add_subcommand(commands[i], descriptions[i]);
    sub->add_option("--config", config_path, "scenario config file (JSON)")
        ->required();
    sub->add_option("--output", output_path,
                    "override the output CSV path from the config");
    sub->add_flag("--verbose", verbose, "progress lines on stderr");
  }

  CLI11_PARSE(app, argc, argv);

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    dice::ScenarioConfig config = dice::parse_config(config_path);
    if (!output_path.empty()) config.output_path = output_path;
    config.optimizer.verbose = verbose;
    return dice::run_command(command, config, std::cout, std::cerr);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return dice::exit_usage;
  }
}
