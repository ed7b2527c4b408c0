#include "dice/trajectory.hpp"

#include <cmath>
#include <stdexcept>

namespace dice {

namespace {

void check_inputs(const State& initial, const ControlPath& controls,
                  const ModelParams& params) {
  if (!(initial.mat > 0.0 && initial.mup > 0.0 && initial.mlo > 0.0 &&
        initial.k > 0.0)) {
    throw std::invalid_argument(
        "simulate: initial carbon reservoirs and capital must be positive");
  }
  const auto n = static_cast<std::size_t>(params.n_periods);
  if (controls.mu.size() != n || controls.s.size() != n) {
    throw std::invalid_argument("simulate: control path length must equal the horizon");
  }
}

} // namespace

SimResult simulate(const State& initial, const ControlPath& controls,
                   std::span<const double> e_inj, std::span<const double> c_inj,
                   const ExogenousPath& exo, const ModelParams& params) {
  check_inputs(initial, controls, params);
  const int n = params.n_periods;

  Trajectory traj;
  traj.states.reserve(n);
  traj.outputs.reserve(n);
  traj.discount.reserve(n);

  State state = initial;
  double acc = 0.0;
  for (int i = 1; i <= n; ++i) {
    if (state.k <= 0.0) return Infeasible{i};
    traj.states.push_back(state);
    detail::PeriodEval ev;
    const double ei = e_inj.empty() ? 0.0 : e_inj[i - 1];
    const double ci = c_inj.empty() ? 0.0 : c_inj[i - 1];
    if (!detail::eval_period(i, state, controls.mu[i - 1], controls.s[i - 1], ei,
                             ci, exo, params, ev) ||
        !ev.feasible) {
      return Infeasible{i};
    }
    const double disc = std::pow(1.0 + params.rho, -(5.0 * (i - 1)));
    acc += disc * ev.utility;
    traj.discount.push_back(disc);
    traj.outputs.push_back(StepOutput{ev.emissions, ev.forcing, ev.ygross, ev.neo,
                                      ev.consumption, ev.utility});
    if (i < n) state = detail::advance(state, ev, controls.s[i - 1], params);
  }
  traj.welfare = 5.0 * params.scale1 * acc - params.scale2;
  return traj;
}

SimResult simulate(const State& initial, const ControlPath& controls,
                   const ExogenousPath& exo, const ModelParams& params) {
  return simulate(initial, controls, {}, {}, exo, params);
}

AuxiliaryQuantities auxiliary(const Trajectory& traj, const ControlPath& controls,
                              const ExogenousPath& exo, const ModelParams& params) {
  const auto n = traj.states.size();
  AuxiliaryQuantities aux;
  aux.ie.resize(n);
  aux.neo.resize(n);
  aux.pcc.resize(n);
  aux.df.resize(n);
  aux.acppm.resize(n);
  aux.mca.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    // same multiplication order as the emissions equation, so that
    // IE + E_Land reproduces E bit for bit
    aux.ie[j] = exo.sigma[j] * (1.0 - controls.mu[j]) * traj.outputs[j].ygross;
    aux.neo[j] = traj.outputs[j].neo;
    aux.pcc[j] = 1000.0 * traj.outputs[j].consumption / exo.labor[j];
    aux.df[j] = params.damage_coeff * traj.states[j].tat * traj.states[j].tat;
    aux.acppm[j] = traj.states[j].mat / 2.13;
    aux.mca[j] = 344.0 * std::pow(0.975, static_cast<double>(j)) *
                 std::pow(controls.mu[j], 1.8);
  }
  return aux;
}

} // namespace dice
