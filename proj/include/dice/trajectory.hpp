#ifndef DICE_TRAJECTORY_HPP
#define DICE_TRAJECTORY_HPP

#include <span>
#include <variant>
#include <vector>

#include "dice/dynamics.hpp"

namespace dice {

/// Mitigation and savings rates over the horizon ([i-1] holds period i).
/// Feasibility with respect to a BoundSchedule is a separate predicate,
/// not a construction invariant.
struct ControlPath {
  std::vector<double> mu;
  std::vector<double> s;
};

/// A simulated path. states[i-1] is the period-i state (states[0] is the
/// initial condition); the state the final period's update would produce is
/// not computed. welfare = 5 * scale1 * sum_i U(i) * discount(i) - scale2.
struct Trajectory {
  std::vector<State> states;
  std::vector<StepOutput> outputs;
  std::vector<double> discount; ///< 1/(1+rho)^(5(i-1))
  double welfare = 0.0;
};

using SimResult = std::variant<Trajectory, Infeasible>;

/// Rolls the dynamics forward from the initial state under the given
/// controls. Returns Infeasible with the offending period when any period's
/// consumption is nonpositive (or the evaluation leaves the model's domain).
/// Throws std::invalid_argument on an invalid initial state or a control
/// path whose length differs from the horizon.
SimResult simulate(const State& initial, const ControlPath& controls,
                   const ExogenousPath& exo, const ModelParams& params);

/// Diagnostic variant with additive per-period perturbations injected into
/// E(i) and C(i) downstream of their defining expressions. Empty spans mean
/// no injection. Used by the marginal cross-checks.
SimResult simulate(const State& initial, const ControlPath& controls,
                   std::span<const double> e_inj, std::span<const double> c_inj,
                   const ExogenousPath& exo, const ModelParams& params);

/// Derived reporting quantities, one entry per period.
struct AuxiliaryQuantities {
  std::vector<double> ie;    ///< industrial emissions [GtCO2]
  std::vector<double> neo;   ///< net economic output [trillions USD]
  std::vector<double> pcc;   ///< per-capita consumption [thousands USD]
  std::vector<double> df;    ///< damages fraction
  std::vector<double> acppm; ///< atmospheric carbon [ppm]
  std::vector<double> mca;   ///< marginal cost of abatement [USD/tCO2]
};

AuxiliaryQuantities auxiliary(const Trajectory& traj, const ControlPath& controls,
                              const ExogenousPath& exo, const ModelParams& params);

} // namespace dice

#endif
