#include <doctest.h>

#include <cmath>

#include "dice/optimizer.hpp"

using namespace dice;

namespace {

const State kInitial{0.80, 0.0068, 830.4, 1527.0, 10010.0, 135.0};

ControlPath default_controls(const ModelParams& p) {
  return ControlPath{std::vector<double>(p.n_periods, p.mu_first),
                     std::vector<double>(p.n_periods, p.s_tail)};
}

} // namespace

TEST_CASE("project clamps and pins fixed entries") {
  const ModelParams p = build_params(60);
  const BoundSchedule b = bound_schedule(p);
  ControlPath c = default_controls(p);
  c.mu[0] = 0.5;  // fixed at 0.039
  c.mu[34] = 1.5; // capped at 1.2 from period 30 on
  c.mu[10] = -0.3;
  c.s[58] = 0.9; // fixed tail
  const ControlPath q = project(c, b);
  CHECK(q.mu[0] == 0.039);
  CHECK(q.mu[34] == 1.2);
  CHECK(q.mu[10] == 0.0);
  CHECK(q.s[58] == 0.258278);
  CHECK(satisfies(q, b));

  // idempotence, bit for bit
  const ControlPath r = project(q, b);
  CHECK(r.mu == q.mu);
  CHECK(r.s == q.s);
}

TEST_CASE("toy problem: active-bound optimum") {
  // maximize -(x-2)^2 over [0,1]: the optimum sits at the upper bound
  BoxProblem prob;
  prob.lower = {0.0};
  prob.upper = {1.0};
  prob.value_and_gradient = [](std::span<const double> x,
                               std::span<double> g) -> std::optional<double> {
    g[0] = -2.0 * (x[0] - 2.0);
    return -(x[0] - 2.0) * (x[0] - 2.0);
  };
  OptimizerConfig cfg;
  const BoxResult r = maximize_box(prob, {0.2}, cfg);
  CHECK(r.status == OptimStatus::converged);
  CHECK(r.x[0] == 1.0);
  CHECK(r.projected_gradient_norm == 0.0);
  CHECK(r.value == doctest::Approx(-1.0).epsilon(1e-15));
}

TEST_CASE("toy problem: interior optimum of a separable quadratic") {
  BoxProblem prob;
  prob.lower = {0.0, 0.0};
  prob.upper = {1.0, 1.0};
  int out_of_bounds_probes = 0;
  prob.value_and_gradient = [&](std::span<const double> x,
                                std::span<double> g) -> std::optional<double> {
    // every point the optimizer evaluates must already be feasible
    for (std::size_t j = 0; j < 2; ++j) {
      if (x[j] < 0.0 || x[j] > 1.0) ++out_of_bounds_probes;
    }
    g[0] = -2.0 * (x[0] - 0.3);
    g[1] = -8.0 * (x[1] - 0.7);
    return -(x[0] - 0.3) * (x[0] - 0.3) - 4.0 * (x[1] - 0.7) * (x[1] - 0.7);
  };
  OptimizerConfig cfg;
  const BoxResult r = maximize_box(prob, {0.9, 0.1}, cfg);
  CHECK(r.status == OptimStatus::converged);
  CHECK(r.x[0] == doctest::Approx(0.3).epsilon(1e-7));
  CHECK(r.x[1] == doctest::Approx(0.7).epsilon(1e-7));
  CHECK(r.iterations <= 10);
  CHECK(out_of_bounds_probes == 0);
}

TEST_CASE("toy problem: line-search failure on an infeasible cliff") {
  // f(x) = x but every point above 0.5 is infeasible; starting at the edge
  // leaves no acceptable step
  BoxProblem prob;
  prob.lower = {0.0};
  prob.upper = {1.0};
  prob.value_and_gradient = [](std::span<const double> x,
                               std::span<double> g) -> std::optional<double> {
    if (x[0] > 0.5) return std::nullopt;
    g[0] = 1.0;
    return x[0];
  };
  OptimizerConfig cfg;
  const BoxResult r = maximize_box(prob, {0.5}, cfg);
  CHECK(r.status == OptimStatus::line_search_failure);
  CHECK(r.x[0] == 0.5);
}

TEST_CASE("dice optimization converges from the default start") {
  const ModelParams p = build_params(60);
  const ExogenousPath e = build_exogenous(p);
  const BoundSchedule b = bound_schedule(p);
  OptimizerConfig cfg;

  const OptimResult r = optimize(kInitial, default_controls(p), b, e, p, cfg);
  CHECK(r.status == OptimStatus::converged);
  CHECK(r.projected_gradient_norm <= cfg.tolerance);
  CHECK(satisfies(r.controls, b));
  CHECK(r.controls.mu[0] == 0.039);
  for (int i = 50; i < 60; ++i) CHECK(r.controls.s[i] == 0.258278);

  // regression lock from the first verified run (also reached by an
  // independent reference optimizer to the digits shown)
  CHECK(r.welfare == doctest::Approx(2689.4268592186).epsilon(1e-9));

  for (std::size_t i = 1; i < r.welfare_history.size(); ++i) {
    CHECK(r.welfare_history[i] >= r.welfare_history[i - 1]);
  }
  CHECK(r.welfare >= r.welfare_history.front());

  SUBCASE("restarting from the optimum terminates immediately") {
    const OptimResult again = optimize(kInitial, r.controls, b, e, p, cfg);
    CHECK(again.status == OptimStatus::converged);
    CHECK(again.iterations <= 2);
    CHECK(std::abs(again.welfare - r.welfare) <= 1e-10 * std::abs(r.welfare));
  }

  SUBCASE("final point is stationary coordinate by coordinate") {
    const auto g = std::get<GradientResult>(welfare_gradient(kInitial, r.controls, e, p));
    for (int i = 0; i < 60; ++i) {
      auto check_coord = [&](double x, double lo, double hi, double grad) {
        if (lo == hi) return; // fixed
        const bool small = std::abs(grad) <= cfg.tolerance;
        const bool at_lower_outward = x == lo && grad < 0.0;
        const bool at_upper_outward = x == hi && grad > 0.0;
        CHECK((small || at_lower_outward || at_upper_outward));
      };
      check_coord(r.controls.mu[i], b.mu_lower[i], b.mu_upper[i], g.grad_mu[i]);
      check_coord(r.controls.s[i], b.s_lower[i], b.s_upper[i], g.grad_s[i]);
    }
  }

  SUBCASE("two runs produce identical iterate sequences") {
    const OptimResult r2 = optimize(kInitial, default_controls(p), b, e, p, cfg);
    CHECK(r2.welfare == r.welfare);
    CHECK(r2.iterations == r.iterations);
    CHECK(r2.welfare_history == r.welfare_history);
    CHECK(r2.controls.mu == r.controls.mu);
    CHECK(r2.controls.s == r.controls.s);
  }
}

TEST_CASE("iteration limit is reported as such") {
  const ModelParams p = build_params(60);
  const ExogenousPath e = build_exogenous(p);
  const BoundSchedule b = bound_schedule(p);
  OptimizerConfig cfg;
  cfg.max_iterations = 2;
  const OptimResult r = optimize(kInitial, default_controls(p), b, e, p, cfg);
  CHECK(r.status == OptimStatus::iteration_limit);
  CHECK(r.iterations == 2);
  CHECK(satisfies(r.controls, b));
}

TEST_CASE("infeasible start falls back to the default start") {
  const ModelParams p = build_params(60);
  const ExogenousPath e = build_exogenous(p);
  const BoundSchedule b = bound_schedule(p);
  ControlPath bad = default_controls(p);
  for (int i = 0; i < 50; ++i) bad.s[i] = 1.0; // zero consumption everywhere
  OptimizerConfig cfg;
  cfg.max_iterations = 5;
  const OptimResult r = optimize(kInitial, bad, b, e, p, cfg);
  CHECK(satisfies(r.controls, b));
  CHECK(r.welfare_history.front() ==
        doctest::Approx(2659.353120119975).epsilon(1e-12));
}
