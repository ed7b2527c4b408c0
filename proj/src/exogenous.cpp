#include "dice/exogenous.hpp"

#include <cmath>

namespace dice {

ExogenousPath build_exogenous(const ModelParams& params) {
  const int n = params.n_periods;
  ExogenousPath e;
  e.sigma.resize(n);
  e.labor.resize(n);
  e.tfp.resize(n);
  e.eland.resize(n);
  e.fex.resize(n);
  e.theta1.resize(n);

  e.sigma[0] = 0.5491;
  e.labor[0] = 6838.0;
  e.tfp[0] = 3.8;
  for (int i = 1; i < n; ++i) {
    // recurrence index is the 1-based source period, here equal to i
    e.sigma[i] = e.sigma[i - 1] * std::exp(-0.01 * std::pow(0.999, 5.0 * i) * 5.0);
    e.labor[i] = e.labor[i - 1] * std::pow(10500.0 / e.labor[i - 1], 0.134);
    e.tfp[i] = e.tfp[i - 1] / (1.0 - 0.079 * std::exp(-0.006 * 5.0 * (i - 1)));
  }
  for (int i = 0; i < n; ++i) {
    e.eland[i] = 3.3 * std::pow(0.8, static_cast<double>(i));
    e.fex[i] = (i + 1 <= 18) ? 0.25 + 0.025 * static_cast<double>(i) : 0.25 + 0.45;
    e.theta1[i] = (344.0 / 2800.0) * std::pow(0.975, static_cast<double>(i)) * e.sigma[i];
  }
  return e;
}

} // namespace dice
