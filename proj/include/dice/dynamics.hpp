#ifndef DICE_DYNAMICS_HPP
#define DICE_DYNAMICS_HPP

#include <optional>
#include <variant>

#include "dice/exogenous.hpp"
#include "dice/params.hpp"

namespace dice {

/// The six endogenous states at one period.
struct State {
  double tat = 0.0; ///< atmospheric temperature anomaly [degC]
  double tlo = 0.0; ///< ocean temperature anomaly [degC]
  double mat = 0.0; ///< atmospheric carbon [GtC], must stay positive
  double mup = 0.0; ///< upper-ocean carbon [GtC], must stay positive
  double mlo = 0.0; ///< lower-ocean carbon [GtC], must stay positive
  double k = 0.0;   ///< capital [trillions 2005 USD], must stay positive
};

/// Per-period derived quantities.
struct StepOutput {
  double emissions = 0.0;   ///< E [GtCO2]
  double forcing = 0.0;     ///< R_F [W/m2]
  double ygross = 0.0;      ///< gross output [trillions USD]
  double neo = 0.0;         ///< net economic output after damages and abatement
  double consumption = 0.0; ///< C [trillions USD]
  double utility = 0.0;     ///< U [utils]
};

/// Recoverable evaluation failure: consumption (or another positivity
/// requirement) failed at the given 1-based period. Consumed by the
/// optimizer's line search as a step rejection.
struct Infeasible {
  int period = 0;
};

/// Cobb-Douglas gross output A * K^gamma * (L/1000)^(1-gamma).
/// Throws std::domain_error on nonpositive capital or labor.
double gross_output(double tfp, double capital, double labor,
                    const ModelParams& params);

/// E(i) = sigma(i) * (1 - mu) * ygross + E_Land(i).
double emissions(int period, const State& state, double mu,
                 const ExogenousPath& exo, const ModelParams& params);

/// R_F(i) = eta * log2((z11 M_AT + z12 M_UP + xi2 E) / mat1750) + F_EX(i).
/// The argument equals next-period atmospheric carbon; the model's mixed
/// discretization is replicated as-is. Throws std::domain_error when the
/// log argument is nonpositive.
double radiative_forcing(int period, const State& state, double emissions_gtco2,
                         const ExogenousPath& exo, const ModelParams& params);

struct OutputFractions {
  double damage = 0.0;    ///< a * T_AT^2
  double abatement = 0.0; ///< theta1(i) * mu^theta2
};
OutputFractions output_fractions(int period, double tat, double mu,
                                 const ExogenousPath& exo,
                                 const ModelParams& params);

struct ConsumptionUtility {
  double consumption = 0.0;
  double utility = 0.0;
};

/// C = neo * (1 - s); U = L * (((1000 C / L)^(1-alpha) - 1)/(1-alpha) - 1).
/// Returns nullopt when C <= 0 (infeasible evaluation, not an error).
std::optional<ConsumptionUtility> consumption_and_utility(double neo, double s,
                                                          double labor,
                                                          const ModelParams& params);

struct StepResult {
  State next;
  StepOutput out;
};

/// One state transition. Evaluation order: ygross, E, R_F, the
/// temperature/carbon/capital updates, then C and U. E feeds both the
/// carbon update and the forcing. Control bounds are not enforced here.
std::variant<StepResult, Infeasible> step(int period, const State& state,
                                          double mu, double s,
                                          const ExogenousPath& exo,
                                          const ModelParams& params);

namespace detail {

/// Everything computed within one period, before the state update.
/// Shared by step() and the trajectory rollout so both are bit-identical.
struct PeriodEval {
  double ygross = 0.0;
  double emissions = 0.0;
  double forcing_arg = 0.0; ///< z11 M_AT + z12 M_UP + xi2 E (= next M_AT)
  double forcing = 0.0;
  double damage_frac = 0.0;
  double abate_frac = 0.0;
  double neo = 0.0;
  double consumption = 0.0;
  double utility = 0.0; ///< valid only when feasible
  bool feasible = false;
};

/// e_inj/c_inj are additive perturbations applied to E and C downstream of
/// their defining expressions (zero in normal operation). Returns false if
/// the forcing argument is nonpositive.
bool eval_period(int period, const State& state, double mu, double s,
                 double e_inj, double c_inj, const ExogenousPath& exo,
                 const ModelParams& params, PeriodEval& ev);

State advance(const State& state, const PeriodEval& ev, double s,
              const ModelParams& params);

} // namespace detail

} // namespace dice

#endif
