#include "dice/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace dice {

double gross_output(double tfp, double capital, double labor,
                    const ModelParams& params) {
  if (capital <= 0.0) throw std::domain_error("gross_output: capital must be positive");
  if (labor <= 0.0) throw std::domain_error("gross_output: labor must be positive");
  return tfp * std::pow(capital, params.gamma) *
         std::pow(labor / 1000.0, 1.0 - params.gamma);
}

double emissions(int period, const State& state, double mu,
                 const ExogenousPath& exo, const ModelParams& params) {
  const double yg = gross_output(exo.tfp[period - 1], state.k,
                                 exo.labor[period - 1], params);
  return exo.sigma[period - 1] * (1.0 - mu) * yg + exo.eland[period - 1];
}

double radiative_forcing(int period, const State& state, double emissions_gtco2,
                         const ExogenousPath& exo, const ModelParams& params) {
  const double arg = params.zeta[0][0] * state.mat + params.zeta[0][1] * state.mup +
                     params.xi2 * emissions_gtco2;
  if (arg <= 0.0)
    throw std::domain_error("radiative_forcing: nonpositive log argument");
  return params.eta * std::log2(arg / params.mat1750) + exo.fex[period - 1];
}

OutputFractions output_fractions(int period, double tat, double mu,
                                 const ExogenousPath& exo,
                                 const ModelParams& params) {
  OutputFractions f;
  f.damage = params.damage_coeff * tat * tat;
  f.abatement = exo.theta1[period - 1] * std::pow(mu, params.theta2);
  return f;
}

std::optional<ConsumptionUtility> consumption_and_utility(double neo, double s,
                                                          double labor,
                                                          const ModelParams& params) {
  ConsumptionUtility cu;
  cu.consumption = neo * (1.0 - s);
  if (cu.consumption <= 0.0) return std::nullopt;
  const double pc = 1000.0 * cu.consumption / labor;
  cu.utility =
      labor * ((std::pow(pc, 1.0 - params.alpha) - 1.0) / (1.0 - params.alpha) - 1.0);
  return cu;
}

namespace detail {

bool eval_period(int period, const State& state, double mu, double s,
                 double e_inj, double c_inj, const ExogenousPath& exo,
                 const ModelParams& params, PeriodEval& ev) {
  const int j = period - 1;
  ev.ygross = exo.tfp[j] * std::pow(state.k, params.gamma) *
              std::pow(exo.labor[j] / 1000.0, 1.0 - params.gamma);
  ev.emissions = exo.sigma[j] * (1.0 - mu) * ev.ygross + exo.eland[j];
  ev.emissions += e_inj;
  ev.forcing_arg = params.zeta[0][0] * state.mat + params.zeta[0][1] * state.mup +
                   params.xi2 * ev.emissions;
  if (ev.forcing_arg <= 0.0) return false;
  ev.forcing = params.eta * std::log2(ev.forcing_arg / params.mat1750) + exo.fex[j];
  ev.damage_frac = params.damage_coeff * state.tat * state.tat;
  ev.abate_frac = exo.theta1[j] * std::pow(mu, params.theta2);
  ev.neo = (1.0 - ev.damage_frac - ev.abate_frac) * ev.ygross;
  ev.consumption = ev.neo * (1.0 - s);
  ev.consumption += c_inj;
  ev.feasible = ev.consumption > 0.0;
  if (ev.feasible) {
    const double pc = 1000.0 * ev.consumption / exo.labor[j];
    ev.utility = exo.labor[j] *
                 ((std::pow(pc, 1.0 - params.alpha) - 1.0) / (1.0 - params.alpha) - 1.0);
  }
  return true;
}

State advance(const State& state, const PeriodEval& ev, double s,
              const ModelParams& params) {
  State next;
  next.tat = params.phi[0][0] * state.tat + params.phi[0][1] * state.tlo +
             params.xi1 * ev.forcing;
  next.tlo = params.phi[1][0] * state.tat + params.phi[1][1] * state.tlo;
  next.mat = ev.forcing_arg; // z11 M_AT + z12 M_UP + xi2 E, shared with R_F
  next.mup = params.zeta[1][0] * state.mat + params.zeta[1][1] * state.mup +
             params.zeta[1][2] * state.mlo;
  next.mlo = params.zeta[2][1] * state.mup + params.zeta[2][2] * state.mlo;
  next.k = std::pow(1.0 - params.delta, 5.0) * state.k + 5.0 * ev.neo * s;
  return next;
}

} // namespace detail

std::variant<StepResult, Infeasible> step(int period, const State& state,
                                          double mu, double s,
                                          const ExogenousPath& exo,
                                          const ModelParams& params) {
  detail::PeriodEval ev;
  if (!detail::eval_period(period, state, mu, s, 0.0, 0.0, exo, params, ev) ||
      !ev.feasible) {
    return Infeasible{period};
  }
  StepResult r;
  r.next = detail::advance(state, ev, s, params);
  r.out = StepOutput{ev.emissions, ev.forcing,     ev.ygross,
                     ev.neo,       ev.consumption, ev.utility};
  return r;
}

} // namespace dice
