#include "dice/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <random>
#include <stdexcept>

namespace dice {

namespace {

double clamp(double v, double lo, double hi) { return std::min(std::max(v, lo), hi); }

double dot(std::span<const double> a, std::span<const double> b) {
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) acc += a[j] * b[j];
  return acc;
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

struct Pair {
  std::vector<double> s, y; ///< y stored as -(g_new - g_old), so s.y > 0
};

class BoxMaximizer {
public:
  BoxMaximizer(const BoxProblem& problem, const OptimizerConfig& config,
               std::span<const double> gradient_scale)
      : p_(problem), cfg_(config), n_(problem.lower.size()), scale_(n_, 1.0) {
    if (!gradient_scale.empty()) {
      scale_.assign(gradient_scale.begin(), gradient_scale.end());
    }
    fixed_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) fixed_[j] = p_.lower[j] == p_.upper[j];
  }

  BoxResult run(std::vector<double> x) {
    project_inplace(x);
    std::vector<double> g(n_);
    std::optional<double> f = p_.value_and_gradient(x, g);
    if (!f) throw std::invalid_argument("maximize_box: start point is infeasible");

    BoxResult res;
    res.value_history.push_back(*f);
    diag_ = curvature_diagonal(x, g);
    int last_refresh = 0;
    int accepted = 0;

    std::vector<double> gm(n_), d(n_), xn(n_), gn(n_);
    for (int k = 0; k < cfg_.max_iterations; ++k) {
      const double pg = projected_gradient_norm(x, g);
      if (cfg_.verbose) {
        std::fprintf(stderr, "iter %d welfare=%.12f pg=%.3e\n", accepted, *f, pg);
      }
      if (pg <= cfg_.tolerance) {
        return finish(res, std::move(x), *f, OptimStatus::converged, accepted, pg);
      }
      if (cfg_.curvature_refresh_every > 0 &&
          k - last_refresh >= cfg_.curvature_refresh_every) {
        diag_ = curvature_diagonal(x, g);
        pairs_.clear();
        last_refresh = k;
      }

      // working set: coordinates pinned at a bound with an outward gradient
      std::vector<bool> active(n_);
      for (std::size_t j = 0; j < n_; ++j) {
        active[j] = fixed_[j] || (x[j] <= p_.lower[j] && g[j] < 0.0) ||
                    (x[j] >= p_.upper[j] && g[j] > 0.0);
        gm[j] = active[j] ? 0.0 : g[j] * scale_[j];
      }

      two_loop(gm, d);
      for (std::size_t j = 0; j < n_; ++j) {
        if (active[j]) d[j] = 0.0;
      }
      if (dot(d, gm) <= 1e-12 * norm2(d) * norm2(gm)) {
        pairs_.clear();
        steepest(gm, d);
      }

      bool ok = line_search(x, *f, g, d, xn, gn);
      if (!ok) {
        pairs_.clear();
        steepest(gm, d);
        ok = line_search(x, *f, g, d, xn, gn);
      }
      if (!ok) {
        return finish(res, std::move(x), *f, OptimStatus::line_search_failure,
                      accepted, pg);
      }

      Pair pr;
      pr.s.resize(n_);
      pr.y.resize(n_);
      for (std::size_t j = 0; j < n_; ++j) {
        pr.s[j] = xn[j] - x[j];
        pr.y[j] = -(gn[j] - g[j]);
      }
      if (dot(pr.s, pr.y) > 1e-10 * norm2(pr.s) * norm2(pr.y)) {
        pairs_.push_back(std::move(pr));
        if (static_cast<int>(pairs_.size()) > cfg_.memory) pairs_.pop_front();
      }

      x.swap(xn);
      g.swap(gn);
      f = ls_value_;
      ++accepted;
      res.value_history.push_back(*f);
    }
    const double pg_final = projected_gradient_norm(x, g);
    return finish(res, std::move(x), *f, OptimStatus::iteration_limit, accepted,
                  pg_final);
  }

private:
  void project_inplace(std::vector<double>& x) const {
    for (std::size_t j = 0; j < n_; ++j) x[j] = clamp(x[j], p_.lower[j], p_.upper[j]);
  }

  double projected_gradient_norm(std::span<const double> x,
                                 std::span<const double> g) const {
    double worst = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
      const double moved = clamp(x[j] + g[j] * scale_[j], p_.lower[j], p_.upper[j]);
      worst = std::max(worst, std::abs(x[j] - moved));
    }
    return worst;
  }

  /// Diagonal of the (negated) Hessian estimated by one-sided gradient
  /// differences, floored to stay positive.
  std::vector<double> curvature_diagonal(std::span<const double> x,
                                         std::span<const double> g) {
    std::vector<double> d(n_, -1.0);
    std::vector<double> xp(x.begin(), x.end()), gp(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      if (fixed_[j]) continue;
      const double h =
          (x[j] + cfg_.curvature_fd_step <= p_.upper[j]) ? cfg_.curvature_fd_step
                                                         : -cfg_.curvature_fd_step;
      const double saved = xp[j];
      xp[j] = x[j] + h;
      if (p_.value_and_gradient(xp, gp)) d[j] = -(gp[j] - g[j]) / h;
      xp[j] = saved;
    }
    std::vector<double> positives;
    for (std::size_t j = 0; j < n_; ++j) {
      if (!fixed_[j] && d[j] > 0.0) positives.push_back(d[j]);
    }
    double floor = 1e-8;
    if (!positives.empty()) {
      auto mid = positives.begin() + positives.size() / 2;
      std::nth_element(positives.begin(), mid, positives.end());
      floor = *mid * 1e-6;
    }
    for (std::size_t j = 0; j < n_; ++j) {
      if (!(d[j] > floor)) d[j] = std::max(floor, std::abs(d[j]));
    }
    return d;
  }

  /// d = H * q with H from the stored pairs on top of the diagonal seed.
  void two_loop(std::span<const double> q_in, std::vector<double>& d) {
    d.assign(q_in.begin(), q_in.end());
    const std::size_t m = pairs_.size();
    std::vector<double> alpha(m), rho(m);
    for (std::size_t idx = m; idx-- > 0;) {
      const Pair& pr = pairs_[idx];
      rho[idx] = 1.0 / dot(pr.s, pr.y);
      alpha[idx] = rho[idx] * dot(pr.s, d);
      for (std::size_t j = 0; j < n_; ++j) d[j] -= alpha[idx] * pr.y[j];
    }
    for (std::size_t j = 0; j < n_; ++j) d[j] /= diag_[j];
    for (std::size_t idx = 0; idx < m; ++idx) {
      const Pair& pr = pairs_[idx];
      const double beta = rho[idx] * dot(pr.y, d);
      for (std::size_t j = 0; j < n_; ++j) d[j] += (alpha[idx] - beta) * pr.s[j];
    }
  }

  void steepest(std::span<const double> gm, std::vector<double>& d) const {
    d.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) d[j] = gm[j] / diag_[j];
  }

  /// Backtracking along the projection arc with a sufficient-increase test.
  /// On success xn/gn hold the accepted point and ls_value_ its welfare.
  bool line_search(std::span<const double> x, double f, std::span<const double> g,
                   std::span<const double> d, std::vector<double>& xn,
                   std::vector<double>& gn) {
    double alpha = 1.0;
    for (int trial = 0; trial < cfg_.ls_max_trials; ++trial) {
      double max_move = 0.0;
      for (std::size_t j = 0; j < n_; ++j) {
        xn[j] = clamp(x[j] + alpha * d[j], p_.lower[j], p_.upper[j]);
        max_move = std::max(max_move, std::abs(xn[j] - x[j]));
      }
      if (max_move == 0.0) return false;
      const std::optional<double> fn = p_.value_and_gradient(xn, gn);
      if (fn) {
        double gstep = 0.0;
        for (std::size_t j = 0; j < n_; ++j) gstep += g[j] * (xn[j] - x[j]);
        if (*fn >= f + cfg_.ls_sufficient_increase * gstep) {
          ls_value_ = *fn;
          return true;
        }
      }
      alpha *= cfg_.ls_backtrack;
    }
    return false;
  }

  BoxResult finish(BoxResult& res, std::vector<double> x, double f,
                   OptimStatus status, int iterations, double pg) {
    res.x = std::move(x);
    res.value = f;
    res.status = status;
    res.iterations = iterations;
    res.projected_gradient_norm = pg;
    return std::move(res);
  }

  const BoxProblem& p_;
  const OptimizerConfig& cfg_;
  std::size_t n_;
  std::vector<double> scale_;
  std::vector<bool> fixed_;
  std::vector<double> diag_;
  std::deque<Pair> pairs_;
  double ls_value_ = 0.0;
};

ControlPath unpack(std::span<const double> x, int n) {
  ControlPath c;
  c.mu.assign(x.begin(), x.begin() + n);
  c.s.assign(x.begin() + n, x.begin() + 2 * n);
  return c;
}

} // namespace

const char* to_string(OptimStatus status) {
  switch (status) {
    case OptimStatus::converged: return "converged";
    case OptimStatus::iteration_limit: return "iteration-limit";
    case OptimStatus::line_search_failure: return "line-search-failure";
  }
  return "unknown";
}

ControlPath project(const ControlPath& controls, const BoundSchedule& schedule) {
  const int n = schedule.n();
  ControlPath out = controls;
  out.mu.resize(n, 0.0);
  out.s.resize(n, 0.0);
  for (int j = 0; j < n; ++j) {
    out.mu[j] = clamp(out.mu[j], schedule.mu_lower[j], schedule.mu_upper[j]);
    out.s[j] = clamp(out.s[j], schedule.s_lower[j], schedule.s_upper[j]);
  }
  return out;
}

bool satisfies(const ControlPath& controls, const BoundSchedule& schedule) {
  const int n = schedule.n();
  if (static_cast<int>(controls.mu.size()) != n ||
      static_cast<int>(controls.s.size()) != n) {
    return false;
  }
  for (int j = 0; j < n; ++j) {
    if (controls.mu[j] < schedule.mu_lower[j] || controls.mu[j] > schedule.mu_upper[j])
      return false;
    if (controls.s[j] < schedule.s_lower[j] || controls.s[j] > schedule.s_upper[j])
      return false;
  }
  return true;
}

BoxResult maximize_box(const BoxProblem& problem, std::vector<double> start,
                       const OptimizerConfig& config,
                       std::span<const double> gradient_scale) {
  BoxMaximizer engine(problem, config, gradient_scale);
  return engine.run(std::move(start));
}

OptimResult optimize(const State& initial, const ControlPath& start,
                     const BoundSchedule& schedule, const ExogenousPath& exo,
                     const ModelParams& params, const OptimizerConfig& config) {
  const int n = params.n_periods;

  BoxProblem problem;
  problem.lower.reserve(2 * n);
  problem.upper.reserve(2 * n);
  problem.lower.insert(problem.lower.end(), schedule.mu_lower.begin(),
                       schedule.mu_lower.end());
  problem.lower.insert(problem.lower.end(), schedule.s_lower.begin(),
                       schedule.s_lower.end());
  problem.upper.insert(problem.upper.end(), schedule.mu_upper.begin(),
                       schedule.mu_upper.end());
  problem.upper.insert(problem.upper.end(), schedule.s_upper.begin(),
                       schedule.s_upper.end());
  problem.value_and_gradient =
      [&](std::span<const double> x, std::span<double> grad) -> std::optional<double> {
    auto res = welfare_gradient(initial, unpack(x, n), exo, params);
    if (std::holds_alternative<Infeasible>(res)) return std::nullopt;
    auto& g = std::get<GradientResult>(res);
    std::copy(g.grad_mu.begin(), g.grad_mu.end(), grad.begin());
    std::copy(g.grad_s.begin(), g.grad_s.end(), grad.begin() + n);
    return g.welfare;
  };

  std::vector<double> scale(2 * n, 1.0);
  for (int j = 0; j < n; ++j) scale[n + j] = config.s_gradient_scale;

  auto flatten = [&](const ControlPath& c) {
    std::vector<double> x;
    x.reserve(2 * n);
    x.insert(x.end(), c.mu.begin(), c.mu.end());
    x.insert(x.end(), c.s.begin(), c.s.end());
    return x;
  };
  auto default_start = [&] {
    return project(ControlPath{std::vector<double>(n, params.mu_first),
                               std::vector<double>(n, params.s_tail)},
                   schedule);
  };

  ControlPath x0 = project(start, schedule);
  if (config.fallback_to_default_start &&
      std::holds_alternative<Infeasible>(simulate(initial, x0, exo, params))) {
    x0 = default_start();
  }

  BoxResult best = maximize_box(problem, flatten(x0), config, scale);

  if (config.restarts > 0) {
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> unit(-1.0, 1.0);
    for (int r = 0; r < config.restarts; ++r) {
      std::vector<double> xr = best.x;
      for (int j = 0; j < 2 * n; ++j) {
        xr[j] = clamp(xr[j] + config.restart_perturbation * unit(rng),
                      problem.lower[j], problem.upper[j]);
      }
      std::vector<double> gtmp(2 * n);
      if (!problem.value_and_gradient(xr, gtmp)) continue;
      BoxResult attempt = maximize_box(problem, std::move(xr), config, scale);
      if (attempt.value > best.value) best = std::move(attempt);
    }
  }

  OptimResult out;
  out.controls = unpack(best.x, n);
  out.welfare = best.value;
  out.status = best.status;
  out.iterations = best.iterations;
  out.projected_gradient_norm = best.projected_gradient_norm;
  out.welfare_history = std::move(best.value_history);
  out.trajectory = std::get<Trajectory>(simulate(initial, out.controls, exo, params));
  return out;
}

} // namespace dice
