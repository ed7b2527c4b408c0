#ifndef DICE_PARAMS_HPP
#define DICE_PARAMS_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

namespace dice {

/// All scalar constants of the DICE2013R model plus the derived climate and
/// carbon diffusion matrices. Matrices are stored row-column indexed.
/// Immutable after construction; safe to share across threads.
struct ModelParams {
  int n_periods = 60;   ///< horizon length N (five-year periods)
  int base_year = 2010; ///< calendar year of period 1
  int step_years = 5;   ///< years per period

  std::array<std::array<double, 2>, 2> phi{};  ///< climate diffusion (2x2)
  std::array<std::array<double, 3>, 3> zeta{}; ///< carbon diffusion (3x3), columns sum to 1

  double eta = 3.8;              ///< forcing of equilibrium CO2 doubling [W/m2]
  double xi1 = 0.098;            ///< forcing-to-temperature multiplier
  double xi2 = 5.0 / 3.666;      ///< GtC per GtCO2 conversion
  double mat1750 = 588.0;        ///< pre-industrial atmospheric carbon [GtC]
  double gamma = 0.3;            ///< capital elasticity in production
  double theta2 = 2.8;           ///< abatement cost exponent
  double damage_coeff = 0.00267; ///< quadratic damage term
  double delta = 0.1;            ///< annual capital depreciation rate
  double alpha = 1.45;           ///< elasticity of marginal utility
  double rho = 0.015;            ///< annual rate of social time preference
  double scale1 = 0.016408662;   ///< utility multiplier
  double scale2 = 3855.106895;   ///< utility offset

  double mu_first = 0.039;      ///< fixed first-period mitigation rate
  double s_tail = 0.258278;     ///< fixed terminal savings rate
  double mu_cap_early = 1.0;    ///< mitigation cap before the switch period
  double mu_cap_late = 1.2;     ///< mitigation cap from the switch period on
  int mu_cap_switch_period = 30;
  int s_tail_len = 10;          ///< number of fixed savings periods at the end

  /// Calendar year of a 1-based period index: year(1) = base_year.
  int year_of(int period) const { return base_year + step_years * (period - 1); }
};

/// Derives the 3x3 carbon diffusion matrix from the two transfer rates and
/// the three equilibrium reservoir masses. Columns sum to one by
/// construction (mass balance). Throws std::invalid_argument on nonpositive
/// inputs or rates outside (0,1).
std::array<std::array<double, 3>, 3>
derive_carbon_matrix(double b12 = 0.088, double b23 = 0.0025,
                     double mateq = 588.0, double mueq = 1350.0,
                     double mleq = 10000.0);

using Overrides = std::map<std::string, double>;

/// Constructs validated model parameters for the given horizon.
///
/// Override keys: eta, xi1, xi2, mat1750, gamma, theta2, a, delta, alpha,
/// rho, scale1, scale2, mu_first, s_tail, mu_cap_early, mu_cap_late, plus
/// the carbon-matrix inputs b12, b23, mateq, mueq, mleq. The phi entries and
/// derived zeta entries are not directly overridable.
///
/// Throws std::invalid_argument on a horizon shorter than s_tail_len + 1,
/// an unknown override key, or an override violating a positivity invariant.
ModelParams build_params(int n_periods = 60, const Overrides& overrides = {});

/// Per-period control bounds. Entry [i-1] holds the bounds of period i.
/// A fixed entry is encoded as lower == upper.
struct BoundSchedule {
  std::vector<double> mu_lower, mu_upper;
  std::vector<double> s_lower, s_upper;

  int n() const { return static_cast<int>(mu_lower.size()); }
  bool mu_fixed(int period) const { return mu_lower[period - 1] == mu_upper[period - 1]; }
  bool s_fixed(int period) const { return s_lower[period - 1] == s_upper[period - 1]; }
};

/// Builds the constraint schedule: mu(1) fixed, mu capped at mu_cap_early
/// before the switch period and mu_cap_late from it on, s in [0,1] except
/// the fixed terminal tail. Breakpoints are absolute period indices and do
/// not scale with the horizon.
BoundSchedule bound_schedule(const ModelParams& params);

} // namespace dice

#endif
