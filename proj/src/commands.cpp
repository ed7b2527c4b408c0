#include "dice/commands.hpp"

#include <cmath>
#include <ostream>
#include <vector>

namespace dice {

namespace {

int write_infeasible(const Infeasible& inf, std::ostream& err) {
  err << "infeasible evaluation at period " << inf.period
      << " (nonpositive consumption)\n";
  return exit_infeasible;
}

int cmd_simulate(const Scenario& s, const ScenarioConfig& cfg, std::ostream& out,
                 std::ostream& err) {
  SimResult sim = simulate(s.initial, s.controls, s.exo, s.params);
  if (const auto* inf = std::get_if<Infeasible>(&sim)) return write_infeasible(*inf, err);
  const auto& traj = std::get<Trajectory>(sim);
  write_csv(cfg.output_path, trajectory_table(traj, s.controls, s.exo, s.params));
  out << "welfare " << format_value(traj.welfare) << "\n";
  out << "wrote " << cfg.output_path.string() << "\n";
  return exit_ok;
}

int cmd_optimize(const Scenario& s, const ScenarioConfig& cfg, std::ostream& out,
                 std::ostream& err) {
  OptimResult res =
      optimize(s.initial, s.controls, s.schedule, s.exo, s.params, cfg.optimizer);
  write_csv(cfg.output_path,
            trajectory_table(res.trajectory, res.controls, s.exo, s.params));
  out << "J " << format_value(res.welfare) << "\n";
  out << "status " << to_string(res.status) << "\n";
  out << "iterations " << res.iterations << "\n";
  out << "projected_gradient_norm " << format_value(res.projected_gradient_norm)
      << "\n";
  out << "wrote " << cfg.output_path.string() << "\n";
  if (res.status != OptimStatus::converged) {
    err << "optimizer did not converge (" << to_string(res.status)
        << "); partial results written\n";
    return exit_not_converged;
  }
  return exit_ok;
}

int cmd_scc(const Scenario& s, const ScenarioConfig& cfg, std::ostream& out,
            std::ostream& err) {
  auto m = marginals(s.initial, s.controls, s.exo, s.params);
  if (const auto* inf = std::get_if<Infeasible>(&m)) return write_infeasible(*inf, err);
  const auto& set = std::get<MarginalSet>(m);
  SimResult sim = simulate(s.initial, s.controls, s.exo, s.params);
  const auto& traj = std::get<Trajectory>(sim);
  Table t = trajectory_table(traj, s.controls, s.exo, s.params);
  append_scc_columns(t, set);
  write_csv(cfg.output_path, t);
  out << "welfare " << format_value(set.welfare) << "\n";
  out << "scc(1) " << format_value(set.scc.front()) << "\n";
  out << "wrote " << cfg.output_path.string() << "\n";
  return exit_ok;
}

int cmd_aux(const Scenario& s, const ScenarioConfig& cfg, std::ostream& out,
            std::ostream& err) {
  SimResult sim = simulate(s.initial, s.controls, s.exo, s.params);
  if (const auto* inf = std::get_if<Infeasible>(&sim)) return write_infeasible(*inf, err);
  const auto& traj = std::get<Trajectory>(sim);
  Table t = trajectory_table(traj, s.controls, s.exo, s.params);
  append_aux_columns(t, auxiliary(traj, s.controls, s.exo, s.params));
  write_csv(cfg.output_path, t);
  out << "wrote " << cfg.output_path.string() << "\n";
  return exit_ok;
}

int cmd_check_grad(const Scenario& s, const ScenarioConfig& cfg, std::ostream& out,
                   std::ostream& err) {
  auto g = welfare_gradient(s.initial, s.controls, s.exo, s.params);
  if (const auto* inf = std::get_if<Infeasible>(&g)) return write_infeasible(*inf, err);
  const auto& grad = std::get<GradientResult>(g);

  const int n = s.params.n_periods;
  std::vector<double> flat;
  flat.insert(flat.end(), s.controls.mu.begin(), s.controls.mu.end());
  flat.insert(flat.end(), s.controls.s.begin(), s.controls.s.end());
  FdFunction welfare_at = [&](std::span<const double> x) -> std::optional<double> {
    ControlPath c{std::vector<double>(x.begin(), x.begin() + n),
                  std::vector<double>(x.begin() + n, x.end())};
    SimResult r = simulate(s.initial, c, s.exo, s.params);
    if (std::holds_alternative<Infeasible>(r)) return std::nullopt;
    return std::get<Trajectory>(r).welfare;
  };
  auto fd = fd_gradient(welfare_at, flat, cfg.check_grad_step);
  if (const auto* failure = std::get_if<FdFailure>(&fd)) {
    err << "finite-difference probe infeasible at coordinate " << failure->coordinate
        << "\n";
    return exit_infeasible;
  }
  const auto& est = std::get<std::vector<double>>(fd);
  double worst_rel = 0.0, worst_abs = 0.0;
  int worst_coord = -1;
  for (int j = 0; j < 2 * n; ++j) {
    const double a = j < n ? grad.grad_mu[j] : grad.grad_s[j - n];
    worst_abs = std::max(worst_abs, std::abs(a - est[j]));
    // below ~1e-3 the difference is double-precision rounding noise of the
    // welfare, not gradient error
    if (std::abs(a) <= 1e-3) continue;
    const double rel = std::abs(a - est[j]) / std::abs(a);
    if (rel > worst_rel) {
      worst_rel = rel;
      worst_coord = j;
    }
  }
  out << "max relative error " << format_value(worst_rel) << " at coordinate "
      << worst_coord << " over |gradient| > 1e-3 (step "
      << format_value(cfg.check_grad_step) << ")\n";
  out << "max absolute difference " << format_value(worst_abs) << "\n";
  out << "note: the finite-difference side is limited by double-precision "
         "rounding of the welfare\n";
  return exit_ok;
}

int cmd_verify(const ScenarioConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.reference_path.empty()) {
    err << "verify requires verify.reference in the config\n";
    return exit_usage;
  }
  const Table produced = read_csv(cfg.output_path);
  const Table reference = read_csv(cfg.reference_path);
  const VerifyReport report = verify_tables(produced, reference, cfg.verify);
  if (!report.failure.empty()) {
    err << "verification failed: " << report.failure << "\n";
    return exit_verify_failed;
  }
  for (const auto& col : report.columns) {
    if (col.pass) continue;
    out << "column " << col.column << ": worst offender row " << (col.worst_row + 1)
        << " produced " << format_value(col.produced) << " reference "
        << format_value(col.reference) << " |err| " << format_value(col.abs_err)
        << " tolerance " << format_value(col.tol) << "\n";
  }
  for (const auto& skipped : report.skipped) {
    err << "note: column " << skipped << " not compared\n";
  }
  if (!report.pass) {
    err << "verification failed\n";
    return exit_verify_failed;
  }
  out << "verification passed (" << report.columns.size() << " columns)\n";
  return exit_ok;
}

int cmd_plot_data(const Scenario& s, const ScenarioConfig& cfg, std::ostream& out,
                  std::ostream& err) {
  auto m = marginals(s.initial, s.controls, s.exo, s.params);
  if (const auto* inf = std::get_if<Infeasible>(&m)) return write_infeasible(*inf, err);
  SimResult sim = simulate(s.initial, s.controls, s.exo, s.params);
  const auto& traj = std::get<Trajectory>(sim);
  Table t = trajectory_table(traj, s.controls, s.exo, s.params);
  append_scc_columns(t, std::get<MarginalSet>(m));
  append_aux_columns(t, auxiliary(traj, s.controls, s.exo, s.params));
  const auto files = write_plot_series(cfg.plot_prefix, t);
  out << "wrote " << files.size() << " series files with prefix "
      << cfg.plot_prefix.string() << "\n";
  return exit_ok;
}

} // namespace

int run_command(const std::string& command, const ScenarioConfig& config,
                std::ostream& out, std::ostream& err) {
  try {
    if (command == "verify") return cmd_verify(config, out, err);
    const Scenario scenario = build_scenario(config);
    if (command == "simulate") return cmd_simulate(scenario, config, out, err);
    if (command == "optimize") return cmd_optimize(scenario, config, out, err);
    if (command == "scc") return cmd_scc(scenario, config, out, err);
    if (command == "aux") return cmd_aux(scenario, config, out, err);
    if (command == "check-grad") return cmd_check_grad(scenario, config, out, err);
    if (command == "plot-data") return cmd_plot_data(scenario, config, out, err);
    err << "unknown command '" << command << "'\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    err << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    err << e.what() << "\n";
    return exit_usage;
  }
}

} // namespace dice
