#include "dice/sensitivity.hpp"

#include <cmath>

namespace dice {

namespace {

/// Reverse sweep over a simulated trajectory. Recomputes the small
/// per-period pieces (forcing argument, net-output fraction) with the same
/// expressions as the forward pass.
MarginalSet adjoint_sweep(const Trajectory& traj, const ControlPath& controls,
                          const ExogenousPath& exo, const ModelParams& params) {
  const int n = params.n_periods;
  const double ln2 = std::log(2.0);
  const double dep = std::pow(1.0 - params.delta, 5.0);

  MarginalSet m;
  m.welfare = traj.welfare;
  m.lam_e.assign(n, 0.0);
  m.lam_c.assign(n, 0.0);
  m.scc.assign(n, 0.0);
  m.grad_mu.assign(n, 0.0);
  m.grad_s.assign(n, 0.0);

  // adjoints of the period-(i+1) state, all zero when i = n
  double atat = 0.0, atlo = 0.0, amat = 0.0, amup = 0.0, amlo = 0.0, ak = 0.0;

  for (int i = n; i >= 1; --i) {
    const State& st = traj.states[i - 1];
    const StepOutput& out = traj.outputs[i - 1];
    const double mu = controls.mu[i - 1];
    const double s = controls.s[i - 1];
    const double sig = exo.sigma[i - 1];
    const double labor = exo.labor[i - 1];
    const double th1 = exo.theta1[i - 1];
    const bool has_next = i < n;

    // dW/dU(i) and dW/dC(i) through utility
    const double ubar = 5.0 * params.scale1 * traj.discount[i - 1];
    const double pc = 1000.0 * out.consumption / labor;
    const double cbar = ubar * 1000.0 * std::pow(pc, -params.alpha);
    m.lam_c[i - 1] = cbar;

    // C = neo (1 - s); K' also consumes neo when a next period exists
    double neobar = (1.0 - s) * cbar;
    double gs = -out.neo * cbar;
    if (has_next) {
      neobar += 5.0 * s * ak;
      gs += 5.0 * out.neo * ak;
    }
    m.grad_s[i - 1] = gs;

    // neo = (1 - damage - abatement) ygross
    const double nf = out.neo / out.ygross;
    const double nfbar = out.ygross * neobar;
    double ygbar = nf * neobar;
    const double abbar = -nfbar;
    const double dmgbar = -nfbar;

    // forcing feeds only the next-period temperature
    const double rfbar = has_next ? params.xi1 * atat : 0.0;
    const double farg = params.zeta[0][0] * st.mat + params.zeta[0][1] * st.mup +
                        params.xi2 * out.emissions;
    const double fargbar = rfbar * params.eta / (farg * ln2);

    // emissions feed the forcing argument and the carbon update
    double ebar = fargbar * params.xi2;
    if (has_next) ebar += params.xi2 * amat;
    m.lam_e[i - 1] = ebar;

    // E = sigma (1 - mu) ygross + eland;  abatement = theta1 mu^theta2
    m.grad_mu[i - 1] = abbar * th1 * params.theta2 * std::pow(mu, params.theta2 - 1.0) -
                       ebar * sig * out.ygross;
    ygbar += ebar * sig * (1.0 - mu);

    // carry adjoints to the period-i state
    const double natat = 2.0 * params.damage_coeff * st.tat * dmgbar +
                         (has_next ? params.phi[0][0] * atat + params.phi[1][0] * atlo
                                   : 0.0);
    const double natlo =
        has_next ? params.phi[0][1] * atat + params.phi[1][1] * atlo : 0.0;
    const double namat =
        params.zeta[0][0] * fargbar +
        (has_next ? params.zeta[0][0] * amat + params.zeta[1][0] * amup : 0.0);
    const double namup = params.zeta[0][1] * fargbar +
                         (has_next ? params.zeta[0][1] * amat +
                                         params.zeta[1][1] * amup +
                                         params.zeta[2][1] * amlo
                                   : 0.0);
    const double namlo =
        has_next ? params.zeta[1][2] * amup + params.zeta[2][2] * amlo : 0.0;
    const double nak =
        ygbar * params.gamma * out.ygross / st.k + (has_next ? dep * ak : 0.0);

    atat = natat;
    atlo = natlo;
    amat = namat;
    amup = namup;
    amlo = namlo;
    ak = nak;
  }

  for (int i = 0; i < n; ++i) {
    m.scc[i] = scc_from_marginals(m.lam_e[i], m.lam_c[i]);
  }
  return m;
}

} // namespace

double scc_from_marginals(double lam_e, double lam_c) {
  return -1000.0 * lam_e / lam_c;
}

std::variant<MarginalSet, Infeasible> marginals(const State& initial,
                                                const ControlPath& controls,
                                                const ExogenousPath& exo,
                                                const ModelParams& params) {
  SimResult sim = simulate(initial, controls, exo, params);
  if (const auto* inf = std::get_if<Infeasible>(&sim)) return *inf;
  return adjoint_sweep(std::get<Trajectory>(sim), controls, exo, params);
}

std::variant<GradientResult, Infeasible>
welfare_gradient(const State& initial, const ControlPath& controls,
                 const ExogenousPath& exo, const ModelParams& params) {
  auto m = marginals(initial, controls, exo, params);
  if (const auto* inf = std::get_if<Infeasible>(&m)) return *inf;
  auto& set = std::get<MarginalSet>(m);
  GradientResult g;
  g.welfare = set.welfare;
  g.grad_mu = std::move(set.grad_mu);
  g.grad_s = std::move(set.grad_s);
  return g;
}

std::variant<std::vector<double>, FdFailure>
fd_gradient(const FdFunction& f, std::span<const double> point, double step) {
  std::vector<double> x(point.begin(), point.end());
  std::vector<double> grad(x.size(), 0.0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const double saved = x[j];
    x[j] = saved + step;
    const std::optional<double> fp = f(x);
    x[j] = saved - step;
    const std::optional<double> fm = f(x);
    x[j] = saved;
    if (!fp || !fm) return FdFailure{static_cast<int>(j)};
    grad[j] = (*fp - *fm) / (2.0 * step);
  }
  return grad;
}

} // namespace dice
