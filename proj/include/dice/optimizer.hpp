#ifndef DICE_OPTIMIZER_HPP
#define DICE_OPTIMIZER_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "dice/sensitivity.hpp"

namespace dice {

struct OptimizerConfig {
  int max_iterations = 500;
  double tolerance = 1e-6; ///< infinity norm of the scaled projected gradient
  int memory = 10;         ///< quasi-Newton pair count

  double ls_sufficient_increase = 1e-4;
  double ls_backtrack = 0.5;
  int ls_max_trials = 40;

  /// Diagonal rescaling applied to the savings-rate gradient block. Unity by
  /// default; a lever for line-search trouble on rescaled problems.
  double s_gradient_scale = 1.0;

  /// The quasi-Newton seed matrix is a diagonal curvature estimate obtained
  /// by differencing the gradient once per free coordinate; it is rebuilt
  /// (and the pair memory cleared) every this many iterations. 0 disables
  /// the rebuild.
  int curvature_refresh_every = 60;
  double curvature_fd_step = 1e-5;

  /// When the projected start is infeasible, fall back to the default start
  /// (mu = mu_first, s = s_tail throughout) instead of failing.
  bool fallback_to_default_start = true;

  /// Optional perturbed restarts for exploring alternative local optima.
  /// The best result by welfare is kept. Deterministic given the seed.
  int restarts = 0;
  double restart_perturbation = 0.05;
  std::uint64_t seed = 1;

  bool verbose = false; ///< progress lines to stderr
};

enum class OptimStatus { converged, iteration_limit, line_search_failure };

const char* to_string(OptimStatus status);

struct OptimResult {
  ControlPath controls; ///< feasible: bounds satisfied exactly
  Trajectory trajectory;
  double welfare = 0.0;
  OptimStatus status = OptimStatus::iteration_limit;
  int iterations = 0;
  double projected_gradient_norm = 0.0;
  std::vector<double> welfare_history; ///< nondecreasing across accepted iterates
};

/// Componentwise clamp onto the schedule; fixed entries take their fixed
/// values. Idempotent.
ControlPath project(const ControlPath& controls, const BoundSchedule& schedule);

/// Exact bound satisfaction (fixed entries equal their fixed values).
bool satisfies(const ControlPath& controls, const BoundSchedule& schedule);

/// Generic bound-constrained maximization problem. value_and_gradient
/// returns nullopt at infeasible points (treated as line-search rejections)
/// and fills grad otherwise.
struct BoxProblem {
  std::function<std::optional<double>(std::span<const double> x,
                                      std::span<double> grad)>
      value_and_gradient;
  std::vector<double> lower;
  std::vector<double> upper;
};

struct BoxResult {
  std::vector<double> x;
  double value = 0.0;
  OptimStatus status = OptimStatus::iteration_limit;
  int iterations = 0;
  double projected_gradient_norm = 0.0;
  std::vector<double> value_history;
};

/// Projected quasi-Newton ascent (limited-memory BFGS directions over the
/// free coordinates, seeded with a diagonal curvature estimate) with a
/// backtracking line search along the projection arc. Deterministic.
/// gradient_scale, when nonempty, multiplies the gradient componentwise for
/// direction and convergence purposes. Throws std::invalid_argument when the
/// projected start is infeasible.
BoxResult maximize_box(const BoxProblem& problem, std::vector<double> start,
                       const OptimizerConfig& config,
                       std::span<const double> gradient_scale = {});

/// Solves the welfare-maximization over the free control entries by single
/// shooting: adjoint gradients, projected quasi-Newton ascent, and the
/// bound schedule enforced exactly on every iterate.
OptimResult optimize(const State& initial, const ControlPath& start,
                     const BoundSchedule& schedule, const ExogenousPath& exo,
                     const ModelParams& params, const OptimizerConfig& config);

} // namespace dice

#endif
