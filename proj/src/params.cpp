#include "dice/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace dice {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

} // namespace

std::array<std::array<double, 3>, 3>
derive_carbon_matrix(double b12, double b23, double mateq, double mueq,
                     double mleq) {
  require(b12 > 0.0 && b12 < 1.0, "derive_carbon_matrix: b12 must be in (0,1)");
  require(b23 > 0.0 && b23 < 1.0, "derive_carbon_matrix: b23 must be in (0,1)");
  require(mateq > 0.0 && mueq > 0.0 && mleq > 0.0,
          "derive_carbon_matrix: equilibrium masses must be positive");

  std::array<std::array<double, 3>, 3> z{};
  z[0][0] = 1.0 - b12;
  z[1][0] = b12;
  z[0][1] = b12 * mateq / mueq;
  z[1][1] = 1.0 - z[0][1] - b23;
  z[2][1] = b23;
  z[1][2] = b23 * mueq / mleq;
  z[2][2] = 1.0 - z[1][2];
  z[2][0] = 0.0;
  z[0][2] = 0.0;
  return z;
}

ModelParams build_params(int n_periods, const Overrides& overrides) {
  ModelParams p;
  require(n_periods >= p.s_tail_len + 1,
          "build_params: horizon must be at least " +
              std::to_string(p.s_tail_len + 1) + " periods");
  p.n_periods = n_periods;

  p.phi = {{{0.8630, 0.0086}, {0.025, 0.975}}};

  double b12 = 0.088, b23 = 0.0025;
  double mateq = 588.0, mueq = 1350.0, mleq = 10000.0;

  for (const auto& [key, value] : overrides) {
    if (key == "eta") p.eta = value;
    else if (key == "xi1") p.xi1 = value;
    else if (key == "xi2") p.xi2 = value;
    else if (key == "mat1750") p.mat1750 = value;
    else if (key == "gamma") p.gamma = value;
    else if (key == "theta2") p.theta2 = value;
    else if (key == "a") p.damage_coeff = value;
    else if (key == "delta") p.delta = value;
    else if (key == "alpha") p.alpha = value;
    else if (key == "rho") p.rho = value;
    else if (key == "scale1") p.scale1 = value;
    else if (key == "scale2") p.scale2 = value;
    else if (key == "mu_first") p.mu_first = value;
    else if (key == "s_tail") p.s_tail = value;
    else if (key == "mu_cap_early") p.mu_cap_early = value;
    else if (key == "mu_cap_late") p.mu_cap_late = value;
    else if (key == "b12") b12 = value;
    else if (key == "b23") b23 = value;
    else if (key == "mateq") mateq = value;
    else if (key == "mueq") mueq = value;
    else if (key == "mleq") mleq = value;
    else throw std::invalid_argument("build_params: unknown override key '" + key + "'");
  }

  p.zeta = derive_carbon_matrix(b12, b23, mateq, mueq, mleq);

  auto positive = [](double v, const char* name) {
    require(v > 0.0, std::string("build_params: ") + name + " must be positive");
  };
  positive(p.eta, "eta");
  positive(p.xi1, "xi1");
  positive(p.xi2, "xi2");
  positive(p.mat1750, "mat1750");
  positive(p.gamma, "gamma");
  positive(p.theta2, "theta2");
  positive(p.damage_coeff, "a");
  positive(p.delta, "delta");
  positive(p.alpha, "alpha");
  positive(p.rho, "rho");
  positive(p.scale1, "scale1");
  positive(p.mu_cap_early, "mu_cap_early");
  positive(p.mu_cap_late, "mu_cap_late");
  require(p.alpha != 1.0, "build_params: alpha = 1 makes the utility formula singular");
  require(p.mu_first >= 0.0 && p.mu_first <= p.mu_cap_early,
          "build_params: mu_first outside [0, mu_cap_early]");
  require(p.s_tail >= 0.0 && p.s_tail <= 1.0, "build_params: s_tail outside [0,1]");

  return p;
}

BoundSchedule bound_schedule(const ModelParams& params) {
  const int n = params.n_periods;
  BoundSchedule b;
  b.mu_lower.assign(n, 0.0);
  b.mu_upper.assign(n, 0.0);
  b.s_lower.assign(n, 0.0);
  b.s_upper.assign(n, 1.0);

  b.mu_lower[0] = b.mu_upper[0] = params.mu_first;
  for (int i = 2; i <= n; ++i) {
    b.mu_upper[i - 1] =
        i >= params.mu_cap_switch_period ? params.mu_cap_late : params.mu_cap_early;
  }
  for (int i = n - params.s_tail_len + 1; i <= n; ++i) {
    b.s_lower[i - 1] = b.s_upper[i - 1] = params.s_tail;
  }
  return b;
}

} // namespace dice
