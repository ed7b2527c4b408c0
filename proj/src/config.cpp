#include "dice/config.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace dice {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg) {
  throw std::invalid_argument("config: " + msg);
}

double get_number(const json& obj, const std::string& section,
                  const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number()) fail(section + "." + key + " must be a number");
  return v.get<double>();
}

void parse_initial(const json& j, State& initial) {
  if (!j.is_object()) fail("scenario.initial must be an object");
  for (const char* field : {"tat", "tlo", "mat", "mup", "mlo", "k"}) {
    if (!j.contains(field)) fail(std::string("scenario.initial.") + field + " is required");
  }
  initial.tat = get_number(j, "scenario.initial", "tat");
  initial.tlo = get_number(j, "scenario.initial", "tlo");
  initial.mat = get_number(j, "scenario.initial", "mat");
  initial.mup = get_number(j, "scenario.initial", "mup");
  initial.mlo = get_number(j, "scenario.initial", "mlo");
  initial.k = get_number(j, "scenario.initial", "k");
  if (initial.mat <= 0.0) fail("initial.mat must be positive");
  if (initial.mup <= 0.0) fail("initial.mup must be positive");
  if (initial.mlo <= 0.0) fail("initial.mlo must be positive");
  if (initial.k <= 0.0) fail("initial.k must be positive");
}

void parse_controls(const json& j, ScenarioConfig& cfg) {
  if (!j.is_object()) fail("scenario.controls must be an object");
  const std::string source = j.value("source", "defaults");
  if (source == "defaults") {
    cfg.controls_source = ScenarioConfig::ControlsSource::defaults;
  } else if (source == "inline") {
    cfg.controls_source = ScenarioConfig::ControlsSource::inline_arrays;
    if (!j.contains("mu") || !j.contains("s"))
      fail("scenario.controls with source 'inline' needs mu and s arrays");
    cfg.inline_controls.mu = j.at("mu").get<std::vector<double>>();
    cfg.inline_controls.s = j.at("s").get<std::vector<double>>();
  } else if (source == "csv") {
    cfg.controls_source = ScenarioConfig::ControlsSource::csv;
    if (!j.contains("path"))
      fail("scenario.controls with source 'csv' needs a path");
    cfg.controls_csv = j.at("path").get<std::string>();
  } else {
    fail("scenario.controls.source must be defaults, inline or csv");
  }
}

void parse_optimizer(const json& j, OptimizerConfig& opt) {
  if (!j.is_object()) fail("optimizer section must be an object");
  opt.max_iterations = j.value("max_iterations", opt.max_iterations);
  opt.tolerance = j.value("tolerance", opt.tolerance);
  opt.memory = j.value("memory", opt.memory);
  opt.ls_sufficient_increase = j.value("ls_sufficient_increase", opt.ls_sufficient_increase);
  opt.ls_backtrack = j.value("ls_backtrack", opt.ls_backtrack);
  opt.ls_max_trials = j.value("ls_max_trials", opt.ls_max_trials);
  opt.s_gradient_scale = j.value("s_gradient_scale", opt.s_gradient_scale);
  opt.curvature_refresh_every = j.value("curvature_refresh_every", opt.curvature_refresh_every);
  opt.curvature_fd_step = j.value("curvature_fd_step", opt.curvature_fd_step);
  opt.fallback_to_default_start = j.value("fallback_to_default_start", opt.fallback_to_default_start);
  opt.restarts = j.value("restarts", opt.restarts);
  opt.restart_perturbation = j.value("restart_perturbation", opt.restart_perturbation);
  opt.seed = j.value("seed", opt.seed);
  if (opt.max_iterations <= 0) fail("optimizer.max_iterations must be positive");
  if (!(opt.tolerance > 2.3e-16)) fail("optimizer.tolerance must exceed machine epsilon");
  if (opt.memory <= 0) fail("optimizer.memory must be positive");
  if (opt.ls_sufficient_increase <= 0.0) fail("optimizer.ls_sufficient_increase must be positive");
  if (opt.ls_backtrack <= 0.0 || opt.ls_backtrack >= 1.0) fail("optimizer.ls_backtrack must be in (0,1)");
  if (opt.ls_max_trials <= 0) fail("optimizer.ls_max_trials must be positive");
  if (opt.s_gradient_scale <= 0.0) fail("optimizer.s_gradient_scale must be positive");
}

ColumnTolerance parse_tolerance(const json& j, const std::string& where) {
  ColumnTolerance tol;
  if (!j.is_object()) fail(where + " must be an object with abs/rel");
  tol.abs = j.value("abs", 0.0);
  tol.rel = j.value("rel", 0.0);
  if (tol.abs < 0.0 || tol.rel < 0.0) fail(where + " tolerances must be nonnegative");
  return tol;
}

void parse_verify(const json& j, ScenarioConfig& cfg) {
  if (!j.is_object()) fail("verify section must be an object");
  if (j.contains("reference")) cfg.reference_path = j.at("reference").get<std::string>();
  cfg.verify.default_tolerance.rel = j.value("default_rel_tol", 1e-4);
  cfg.verify.default_tolerance.abs = j.value("default_abs_tol", 0.0);
  if (cfg.verify.default_tolerance.rel < 0.0 || cfg.verify.default_tolerance.abs < 0.0)
    fail("verify tolerances must be nonnegative");
  if (j.contains("columns")) {
    for (const auto& [name, tol] : j.at("columns").items()) {
      cfg.verify.per_column[name] = parse_tolerance(tol, "verify.columns." + name);
    }
  }
  if (j.contains("column_map")) {
    for (const auto& [ours, theirs] : j.at("column_map").items()) {
      cfg.verify.column_map[ours] = theirs.get<std::string>();
    }
  }
}

} // namespace

ScenarioConfig parse_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path.string() + "'");

  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    // nlohmann reports "... at line L, column C ..." in e.what()
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  if (!root.is_object()) fail("top level must be an object");

  ScenarioConfig cfg;
  if (!root.contains("scenario")) fail("scenario section is required");
  const json& scen = root.at("scenario");
  if (!scen.is_object()) fail("scenario must be an object");
  cfg.n_periods = scen.value("n_periods", 60);
  if (!scen.contains("initial")) fail("scenario.initial is required");
  parse_initial(scen.at("initial"), cfg.initial);
  if (scen.contains("controls")) parse_controls(scen.at("controls"), cfg);

  if (root.contains("params")) {
    const json& params = root.at("params");
    if (!params.is_object()) fail("params section must be an object");
    for (const auto& [key, value] : params.items()) {
      if (!value.is_number()) fail("params." + key + " must be a number");
      cfg.overrides[key] = value.get<double>();
    }
  }
  if (root.contains("optimizer")) parse_optimizer(root.at("optimizer"), cfg.optimizer);
  if (root.contains("output")) {
    const json& out = root.at("output");
    if (!out.is_object()) fail("output section must be an object");
    if (out.contains("path")) cfg.output_path = out.at("path").get<std::string>();
    if (out.contains("plot_prefix"))
      cfg.plot_prefix = out.at("plot_prefix").get<std::string>();
  }
  if (root.contains("verify")) parse_verify(root.at("verify"), cfg);
  if (root.contains("check_grad")) {
    const json& cg = root.at("check_grad");
    if (!cg.is_object()) fail("check_grad section must be an object");
    cfg.check_grad_step = cg.value("step", cfg.check_grad_step);
    if (cfg.check_grad_step <= 0.0) fail("check_grad.step must be positive");
  }
  return cfg;
}

Scenario build_scenario(const ScenarioConfig& config) {
  Scenario s;
  s.params = build_params(config.n_periods, config.overrides);
  s.exo = build_exogenous(s.params);
  s.schedule = bound_schedule(s.params);
  s.initial = config.initial;

  const int n = s.params.n_periods;
  switch (config.controls_source) {
    case ScenarioConfig::ControlsSource::defaults:
      s.controls = project(ControlPath{std::vector<double>(n, s.params.mu_first),
                                       std::vector<double>(n, s.params.s_tail)},
                           s.schedule);
      break;
    case ScenarioConfig::ControlsSource::inline_arrays:
      if (static_cast<int>(config.inline_controls.mu.size()) != n ||
          static_cast<int>(config.inline_controls.s.size()) != n) {
        throw std::invalid_argument(
            "config: scenario.controls.mu and .s must have n_periods entries");
      }
      s.controls = config.inline_controls;
      break;
    case ScenarioConfig::ControlsSource::csv: {
      const Table t = read_csv(config.controls_csv);
      ControlPath c{t.column("mu"), t.column("s")};
      if (static_cast<int>(c.mu.size()) != n) {
        throw std::invalid_argument("config: controls csv has " +
                                    std::to_string(c.mu.size()) + " rows, expected " +
                                    std::to_string(n));
      }
      s.controls = std::move(c);
      break;
    }
  }
  return s;
}

} // namespace dice
