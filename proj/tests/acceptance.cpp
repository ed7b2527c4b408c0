// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Tolerances are fixed here, not configurable.
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "dice/commands.hpp"
#include "support/quad_model.hpp"

using namespace dice;

namespace {

const State kInitial{0.80, 0.0068, 830.4, 1527.0, 10010.0, 135.0};
constexpr double kEps = 2.220446049250313e-16;

struct Checker {
  int failures = 0;
  std::vector<std::string> notes;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ++failures;
      notes.push_back(what);
    }
  }
  void expect_close(double got, double want, double rel, const std::string& what) {
    const double err = std::abs(got - want);
    if (!(err <= rel * std::max(std::abs(want), 1e-300))) {
      ++failures;
      std::ostringstream ss;
      ss << what << ": got " << format_value(got) << ", want " << format_value(want)
         << " (rel tol " << rel << ")";
      notes.push_back(ss.str());
    }
  }
};

ControlPath default_controls(const ModelParams& p) {
  return ControlPath{std::vector<double>(p.n_periods, p.mu_first),
                     std::vector<double>(p.n_periods, p.s_tail)};
}

// ---------------------------------------------------------------- criteria

void criterion1_parameter_fidelity(Checker& c) {
  const ModelParams p = build_params(60);
  c.expect(p.phi[0][0] == 0.8630 && p.phi[0][1] == 0.0086 && p.phi[1][0] == 0.025 &&
               p.phi[1][1] == 0.975,
           "phi entries");
  // starred table entries are printed at 4-5 significant figures
  c.expect_close(p.zeta[0][0], 0.912, 1e-12, "zeta11");
  c.expect_close(p.zeta[0][1], 0.03833, 5e-4, "zeta12 vs table");
  c.expect_close(p.zeta[0][1], 0.088 * 588.0 / 1350.0, 1e-15, "zeta12 derivation");
  c.expect_close(p.zeta[1][0], 0.088, 1e-15, "zeta21");
  c.expect_close(p.zeta[1][1], 0.9592, 5e-4, "zeta22 vs table");
  c.expect_close(p.zeta[1][2], 0.0003375, 1e-12, "zeta23");
  c.expect_close(p.zeta[2][1], 0.0025, 1e-15, "zeta32");
  c.expect_close(p.zeta[2][2], 0.9996625, 1e-12, "zeta33");
  c.expect(p.eta == 3.8 && p.xi1 == 0.098 && p.xi2 == 5.0 / 3.666 &&
               p.mat1750 == 588.0,
           "eta, xi1, xi2, preindustrial mass");
  c.expect(p.gamma == 0.3 && p.theta2 == 2.8 && p.damage_coeff == 0.00267 &&
               p.delta == 0.1,
           "gamma, theta2, a, delta");
  c.expect(p.alpha == 1.45 && p.rho == 0.015, "alpha, rho");
  c.expect(p.scale1 == 0.016408662 && p.scale2 == 3855.106895, "scale1, scale2");
}

void criterion2_exogenous(Checker& c) {
  const ModelParams p = build_params(60);
  const ExogenousPath e = build_exogenous(p);
  c.expect(e.sigma[0] == 0.5491 && e.labor[0] == 6838.0 && e.tfp[0] == 3.8,
           "first-period anchors exact");
  c.expect_close(e.sigma[1], 0.5224504123722764, 1e-6, "sigma(2)");
  c.expect_close(e.labor[1], 7242.49099028168, 1e-6, "L(2)");
  c.expect_close(e.tfp[1], 4.125950054288817, 1e-6, "A(2)");
  c.expect_close(e.theta1[0], 0.06746085714285714, 1e-6, "theta1(1)");
  c.expect_close(e.eland[1], 2.64, 1e-6, "E_Land(2)");
  c.expect_close(e.fex[9], 0.475, 1e-6, "F_EX(10)");
  c.expect_close(e.fex[18], 0.70, 1e-6, "F_EX(19)");
  bool monotone = true;
  for (int i = 1; i < 60; ++i) {
    monotone = monotone && e.sigma[i] < e.sigma[i - 1] && e.sigma[i] > 0.0;
    monotone = monotone && e.labor[i] > e.labor[i - 1] && e.labor[i] < 10500.0;
    monotone = monotone && e.tfp[i] > e.tfp[i - 1];
    monotone = monotone && e.theta1[i] < e.theta1[i - 1] && e.theta1[i] > 0.0;
    monotone = monotone && e.fex[i] >= e.fex[i - 1];
  }
  c.expect(monotone, "monotonicity over i <= 60");
}

void criterion3_carbon_conservation(Checker& c) {
  const ModelParams p = build_params(60);
  const ExogenousPath e = build_exogenous(p);
  // an arbitrary in-bounds control path exercises the dynamics
  ControlPath controls = default_controls(p);
  for (int i = 1; i < 60; ++i) {
    controls.mu[i] = 0.02 * (i % 40);
    controls.s[i - 1] = 0.15 + 0.004 * (i % 30);
  }
  controls = project(controls, bound_schedule(p));
  const auto traj = std::get<Trajectory>(simulate(kInitial, controls, e, p));
  double cumulative = 0.0;
  for (int i = 0; i + 1 < 60; ++i) {
    const double before = traj.states[i].mat + traj.states[i].mup + traj.states[i].mlo;
    const double after =
        traj.states[i + 1].mat + traj.states[i + 1].mup + traj.states[i + 1].mlo;
    const double injected = p.xi2 * traj.outputs[i].emissions;
    c.expect(std::abs(after - before - injected) <= 1e-9 * before,
             "per-step conservation at period " + std::to_string(i + 1));
    cumulative += injected;
  }
  const double first = traj.states[0].mat + traj.states[0].mup + traj.states[0].mlo;
  const double last =
      traj.states[59].mat + traj.states[59].mup + traj.states[59].mlo;
  c.expect(std::abs(last - first - cumulative) <= 1e-9 * last,
           "cumulative carbon identity");
}

void criterion4_gradient(Checker& c) {
  const ModelParams p = build_params(60);
  const ExogenousPath e = build_exogenous(p);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> mu_dist(0.0, 1.0);
  std::uniform_real_distribution<double> s_dist(0.05, 0.6);
  for (int trial = 0; trial < 5; ++trial) {
    ControlPath controls;
    controls.mu.resize(60);
    controls.s.resize(60);
    for (int i = 0; i < 60; ++i) {
      controls.mu[i] = mu_dist(rng);
      controls.s[i] = s_dist(rng);
    }
    controls.mu[0] = p.mu_first;
    for (int i = 50; i < 60; ++i) controls.s[i] = p.s_tail;

    const auto res = welfare_gradient(kInitial, controls, e, p);
    const auto* g = std::get_if<GradientResult>(&res);
    c.expect(g != nullptr, "feasible sample " + std::to_string(trial));
    if (!g) continue;
    const auto fd = testing::quad_fd_control_gradient(kInitial, controls, e, p, 1e-6);
    double worst = 0.0;
    for (int j = 0; j < 120; ++j) {
      const double a = j < 60 ? g->grad_mu[j] : g->grad_s[j - 60];
      if (std::abs(a) <= 1e-8) continue;
      worst = std::max(worst, std::abs(a - fd[j]) / std::abs(a));
    }
    c.expect(worst <= 1e-6, "trial " + std::to_string(trial) +
                                " max rel err " + format_value(worst));
  }
}

OptimResult run_default_optimization() {
  const ModelParams p = build_params(60);
  const ExogenousPath e = build_exogenous(p);
  const BoundSchedule b = bound_schedule(p);
  OptimizerConfig cfg; // defaults throughout
  return optimize(kInitial, default_controls(p), b, e, p, cfg);
}

void criterion5_marginals(Checker& c, const OptimResult& opt) {
  const ModelParams p = build_params(60);
  const ExogenousPath e = build_exogenous(p);
  const auto m = std::get<MarginalSet>(marginals(kInitial, opt.controls, e, p));
  const auto fd = testing::quad_fd_marginals(kInitial, opt.controls, e, p, 1e-4);
  for (int i = 0; i < 60; ++i) {
    if (std::abs(m.lam_e[i]) > 1e-12) {
      c.expect(std::abs(fd.lam_e[i] - m.lam_e[i]) <= 1e-4 * std::abs(m.lam_e[i]),
               "lamE(" + std::to_string(i + 1) + ")");
    } else {
      c.expect(std::abs(fd.lam_e[i]) <= 1e-10,
               "lamE(" + std::to_string(i + 1) + ") near zero");
    }
    c.expect(std::abs(fd.lam_c[i] - m.lam_c[i]) <= 1e-4 * std::abs(m.lam_c[i]),
             "lamC(" + std::to_string(i + 1) + ")");
    c.expect(m.scc[i] == -1000.0 * m.lam_e[i] / m.lam_c[i],
             "SCC arithmetic recheck at " + std::to_string(i + 1));
  }
  // sign expectation, reported but not failed: negative emission marginals
  // except the structurally zero final period
  int nonnegative = 0;
  for (int i = 0; i + 1 < 60; ++i) nonnegative += m.lam_e[i] >= 0.0 ? 1 : 0;
  if (nonnegative > 0) {
    std::cout << "       note: " << nonnegative
              << " nonnegative lamE entries before the final period\n";
  }
}

void criterion6_optimizer(Checker& c, const OptimResult& opt) {
  const ModelParams p = build_params(60);
  const ExogenousPath e = build_exogenous(p);
  const BoundSchedule b = bound_schedule(p);
  OptimizerConfig cfg;

  c.expect(opt.status == OptimStatus::converged, "converged status");
  c.expect(opt.projected_gradient_norm <= 1e-6,
           "projected gradient norm " + format_value(opt.projected_gradient_norm));
  c.expect(satisfies(opt.controls, b), "final point feasible");
  bool nondecreasing = true;
  for (std::size_t i = 1; i < opt.welfare_history.size(); ++i) {
    nondecreasing = nondecreasing && opt.welfare_history[i] >= opt.welfare_history[i - 1];
  }
  c.expect(nondecreasing, "welfare history nondecreasing");

  // regression lock from the first verified run
  c.expect_close(opt.welfare, 2689.4268592186, 1e-9, "optimal welfare regression");

  const OptimResult again = optimize(kInitial, opt.controls, b, e, p, cfg);
  c.expect(again.status == OptimStatus::converged && again.iterations <= 2,
           "restart from optimum terminates in <= 2 iterations (got " +
               std::to_string(again.iterations) + ")");
  c.expect(std::abs(again.welfare - opt.welfare) <= 1e-10 * std::abs(opt.welfare),
           "restart does not move the welfare");

  // optional comparison against a user-supplied reference export
  if (const char* ref = std::getenv("DICE_REFERENCE_CSV")) {
    try {
      const Table t = read_csv(ref);
      const int j = t.column_index("J");
      if (j >= 0 && !t.rows.empty()) {
        c.expect(opt.welfare >= t.rows[0][j] - 1e-6,
                 "welfare at least the reference value");
      }
    } catch (const std::exception& ex) {
      c.expect(false, std::string("reference csv unreadable: ") + ex.what());
    }
  }
}

void criterion7_constraints(Checker& c, const OptimResult& opt) {
  c.expect(opt.controls.mu[0] == 0.039, "mu(1) fixed");
  for (int i = 2; i <= 29; ++i) {
    c.expect(opt.controls.mu[i - 1] >= 0.0 && opt.controls.mu[i - 1] <= 1.0,
             "mu bound at period " + std::to_string(i));
  }
  for (int i = 30; i <= 60; ++i) {
    c.expect(opt.controls.mu[i - 1] >= 0.0 && opt.controls.mu[i - 1] <= 1.2,
             "late mu bound at period " + std::to_string(i));
  }
  for (int i = 1; i <= 50; ++i) {
    c.expect(opt.controls.s[i - 1] >= 0.0 && opt.controls.s[i - 1] <= 1.0,
             "s bound at period " + std::to_string(i));
  }
  for (int i = 51; i <= 60; ++i) {
    c.expect(opt.controls.s[i - 1] == 0.258278,
             "s fixed at period " + std::to_string(i));
  }
}

void criterion8_auxiliary(Checker& c) {
  const ModelParams p = build_params(60);
  const ExogenousPath e = build_exogenous(p);
  const ControlPath controls = default_controls(p);
  const auto traj = std::get<Trajectory>(simulate(kInitial, controls, e, p));
  const AuxiliaryQuantities aux = auxiliary(traj, controls, e, p);
  for (int i = 0; i < 60; ++i) {
    c.expect(aux.ie[i] + e.eland[i] == traj.outputs[i].emissions,
             "IE + E_Land = E at period " + std::to_string(i + 1));
    // one division and one multiplication of rounding
    c.expect(std::abs(aux.acppm[i] * 2.13 - traj.states[i].mat) <=
                 4.0 * kEps * traj.states[i].mat,
             "ACppm * 2.13 = MAT at period " + std::to_string(i + 1));
  }
  c.expect_close(aux.mca[0], 1.001, 1e-3, "MCA(1) at mu = 0.039");
}

void criterion9_cli_round_trip(Checker& c) {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "dice_acceptance";
  fs::create_directories(dir);

  ScenarioConfig cfg;
  cfg.n_periods = 60;
  cfg.initial = kInitial;
  cfg.output_path = dir / "sim.csv";

  std::ostringstream out, err;
  c.expect(run_command("simulate", cfg, out, err) == exit_ok, "simulate exit 0");

  const Table t = read_csv(cfg.output_path);
  const std::vector<std::string> base = {"year", "K",  "TATM", "TLO", "MAT",
                                         "MUP",  "MLO", "mu",   "s",   "E",
                                         "RF",   "C",   "U"};
  bool schema = t.columns.size() >= base.size();
  for (std::size_t i = 0; i < base.size() && schema; ++i) {
    schema = t.columns[i] == base[i];
  }
  c.expect(schema, "base column schema");
  c.expect(!t.rows.empty() && t.rows[0][0] == 2010.0, "year(1) = 2010");

  // write back and compare bytes
  const fs::path copy = dir / "copy.csv";
  write_csv(copy, t);
  std::ifstream f1(cfg.output_path, std::ios::binary), f2(copy, std::ios::binary);
  std::stringstream b1, b2;
  b1 << f1.rdbuf();
  b2 << f2.rdbuf();
  c.expect(b1.str() == b2.str(), "read-back is bit-identical");

  cfg.reference_path = cfg.output_path;
  cfg.verify.default_tolerance = {0.0, 0.0};
  std::ostringstream out2, err2;
  c.expect(run_command("verify", cfg, out2, err2) == exit_ok,
           "verify(file, itself, tol 0) exits 0");

  Table perturbed = t;
  perturbed.rows[7][perturbed.column_index("TATM")] += 1e-2;
  const fs::path pert_path = dir / "perturbed.csv";
  write_csv(pert_path, perturbed);
  cfg.reference_path = pert_path;
  std::ostringstream out3, err3;
  const int code = run_command("verify", cfg, out3, err3);
  c.expect(code == exit_verify_failed, "perturbed verify exits 3");
  c.expect(out3.str().find("TATM") != std::string::npos,
           "perturbed verify names the column");

  fs::remove_all(dir);
}

} // namespace

int main() {
  struct Criterion {
    std::string name;
    std::function<void(Checker&)> run;
  };

  // the optimization result is shared by criteria 5-7
  OptimResult opt;
  bool opt_ready = false;
  auto ensure_opt = [&] {
    if (!opt_ready) {
      opt = run_default_optimization();
      opt_ready = true;
    }
  };

  const std::vector<Criterion> criteria = {
      {"1 parameter fidelity", criterion1_parameter_fidelity},
      {"2 exogenous spot values and monotonicity", criterion2_exogenous},
      {"3 carbon conservation", criterion3_carbon_conservation},
      {"4 adjoint gradient vs central differences", criterion4_gradient},
      {"5 marginals and SCC at the optimum",
       [&](Checker& c) {
         ensure_opt();
         criterion5_marginals(c, opt);
       }},
      {"6 optimizer soundness", [&](Checker& c) {
         ensure_opt();
         criterion6_optimizer(c, opt);
       }},
      {"7 constraint schedule on the optimized controls", [&](Checker& c) {
         ensure_opt();
         criterion7_constraints(c, opt);
       }},
      {"8 auxiliary identities", criterion8_auxiliary},
      {"9 CLI round-trip and verify", criterion9_cli_round_trip},
  };

  int failed = 0;
  for (const auto& criterion : criteria) {
    Checker checker;
    const auto start = std::chrono::steady_clock::now();
    try {
      criterion.run(checker);
    } catch (const std::exception& e) {
      checker.failures++;
      checker.notes.push_back(std::string("exception: ") + e.what());
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    const bool pass = checker.failures == 0;
    failed += pass ? 0 : 1;
    std::cout << (pass ? "[PASS]" : "[FAIL]") << " criterion " << criterion.name
              << " (" << ms << " ms)\n";
    for (std::size_t i = 0; i < checker.notes.size() && i < 8; ++i) {
      std::cout << "       - " << checker.notes[i] << "\n";
    }
    if (checker.notes.size() > 8) {
      std::cout << "       - ... " << (checker.notes.size() - 8) << " more\n";
    }
  }
  std::cout << (failed == 0 ? "all criteria passed\n"
                            : std::to_string(failed) + " criteria failed\n");
  return failed == 0 ? 0 : 1;
}
