#ifndef DICE_SENSITIVITY_HPP
#define DICE_SENSITIVITY_HPP

#include <functional>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "dice/trajectory.hpp"

namespace dice {

struct GradientResult {
  double welfare = 0.0;
  std::vector<double> grad_mu; ///< dW/dmu(i), including fixed entries
  std::vector<double> grad_s;  ///< dW/ds(i), including the fixed tail
};

/// Welfare and its exact derivative with respect to every control entry,
/// computed by reverse accumulation through the recurrence (one forward
/// rollout plus one backward sweep). Entries for fixed controls are still
/// reported; projection happens in the optimizer.
std::variant<GradientResult, Infeasible>
welfare_gradient(const State& initial, const ControlPath& controls,
                 const ExogenousPath& exo, const ModelParams& params);

/// Marginal welfare of per-period emission and consumption injections, the
/// social cost of carbon, and the control gradient.
///
/// lam_e(i) is dW with respect to an additive perturbation of E(i) applied
/// after its defining equation (flowing into both the carbon update and the
/// forcing); lam_c(i) likewise for C(i) (flowing only into utility). Both
/// are evaluated at zero perturbation. scc(i) = -1000 lam_e(i)/lam_c(i).
struct MarginalSet {
  std::vector<double> lam_e;
  std::vector<double> lam_c;
  std::vector<double> scc; ///< USD per tC
  std::vector<double> grad_mu;
  std::vector<double> grad_s;
  double welfare = 0.0;
};

std::variant<MarginalSet, Infeasible> marginals(const State& initial,
                                                const ControlPath& controls,
                                                const ExogenousPath& exo,
                                                const ModelParams& params);

/// SCC(i) = -1000 * lam_e / lam_c.
double scc_from_marginals(double lam_e, double lam_c);

/// A finite-difference probe failed (objective infeasible) while displacing
/// this 0-based coordinate.
struct FdFailure {
  int coordinate = -1;
};

/// Objective for finite differencing: returns nullopt at infeasible points.
using FdFunction = std::function<std::optional<double>(std::span<const double>)>;

/// Central-difference gradient estimate of f at the given point. Used by
/// tests and the check-grad command; accuracy is limited by double-precision
/// rounding of f.
std::variant<std::vector<double>, FdFailure>
fd_gradient(const FdFunction& f, std::span<const double> point, double step);

} // namespace dice

#endif
