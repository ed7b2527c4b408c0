#ifndef DICE_EXOGENOUS_HPP
#define DICE_EXOGENOUS_HPP

#include <vector>

#include "dice/params.hpp"

namespace dice {

/// The six control-independent signals of the model, one entry per period
/// (index [i-1] holds period i). Built once per scenario and shared.
struct ExogenousPath {
  std::vector<double> sigma;  ///< emissions intensity [GtCO2 per unit gross output]
  std::vector<double> labor;  ///< world population [millions]
  std::vector<double> tfp;    ///< total factor productivity
  std::vector<double> eland;  ///< land-use emissions [GtCO2]
  std::vector<double> fex;    ///< exogenous non-CO2 forcing [W/m2]
  std::vector<double> theta1; ///< abatement cost coefficient path
};

/// Evaluates the exogenous recurrences over the horizon:
///   sigma(1) = 0.5491, sigma(i+1) = sigma(i) * exp(-0.01 * 0.999^(5i) * 5)
///   L(1) = 6838,  L(i+1) = L(i) * (10500 / L(i))^0.134
///   A(1) = 3.8,   A(i+1) = A(i) / (1 - 0.079 * exp(-0.006 * 5 * (i-1)))
///   E_Land(i) = 3.3 * 0.8^(i-1)
///   F_EX(i) = 0.25 + 0.025 (i-1) for i <= 18, then 0.70
///   theta1(i) = (344/2800) * 0.975^(i-1) * sigma(i)
ExogenousPath build_exogenous(const ModelParams& params);

} // namespace dice

#endif
