#include "spinglass/fdt.hpp"

#include <cmath>

#include "spinglass/error.hpp"
#include "spinglass/phase.hpp"

namespace sg {

FdtSolution solve_fdt(const Mixture& m, double beta, double gamma, double T, double h) {
  const int n = grid_steps(T, h);
  FdtSolution f;
  f.h = h;
  f.gamma = gamma;
  f.beta = beta;
  f.c_inf = c_inf(m, beta, gamma);
  f.c.assign(n + 1, 0.0);
  f.dc.assign(n + 1, 0.0);
  std::vector<double> phi(n + 1);
  f.c[0] = 1.0;
  f.dc[0] = -0.5;
  phi[0] = m.phi_gamma(beta, gamma, 1.0);
  const double denom = 1.0 + 0.5 * h * phi[0];
  const int per_unit = int(std::lround(1.0 / h));
  for (int k = 1; k <= n; ++k) {
    double conv = 0.0;
    for (int j = 1; j < k; ++j) conv += phi[j] * f.dc[k - j];
    double ck = f.c[k - 1] + h * f.dc[k - 1];
    double dk = 0.0;
    for (int pass = 0; pass < 2; ++pass) {
      const double phik = m.phi_gamma(beta, gamma, ck);
      dk = (-0.5 - h * (conv + 0.5 * phik * f.dc[0])) / denom;
      ck = f.c[k - 1] + 0.5 * h * (f.dc[k - 1] + dk);
    }
    f.c[k] = ck;
    f.dc[k] = dk;
    phi[k] = m.phi_gamma(beta, gamma, ck);
    if (f.plateau_time < 0.0 && k >= per_unit && std::fabs(f.c[k] - f.c[k - per_unit]) < 1e-8)
      f.plateau_time = k * h;
  }
  f.plateau_warning = std::fabs(f.c[n] - f.c_inf) > 10.0 * h;
  return f;
}

TwoTimeSolution stationary_two_time(const FdtSolution& f, const InitCondition& ic) {
  const Mixture& m = ic.mixture();
  const auto& s = ic.spec();
  const Stationarity st = check_stationary(ic, f.beta);
  if (!st.admissible) fail(Code::not_admissible, "initial condition is not stationary at this beta");
  const double g = ic.rs() ? 0.5 : gamma_star(m, f.beta, s.q_star, ic.alpha());
  if (std::fabs(g - f.gamma) > 1e-9 * (1.0 + std::fabs(g)))
    fail(Code::not_admissible, "FDT solution gamma does not match the stationary gamma");
  const int n = int(f.c.size()) - 1;
  TwoTimeSolution S;
  S.resize(n, f.h);
  const double b_a = ic.rs() ? 0.0 : m.nu(s.q_o, 1) / m.nu(s.q_star * s.q_star, 1);
  const double mu = f.gamma + 2.0 * f.beta * f.beta * m.nu(1.0, 1);
  for (int i = 0; i <= n; ++i) {
    for (int j = 0; j <= i; ++j) {
      S.C[TwoTimeSolution::idx(i, j)] = f.c[i - j];
      S.R[TwoTimeSolution::idx(i, j)] = i == j ? 1.0 : f.r(i - j);
    }
    S.q[i] = s.q_o;
    S.K[i] = 1.0;
    S.H[i] = s.E;
    S.mu[i] = mu;
    S.L[i] = -2.0 * b_a * (f.c[i] - 1.0);
  }
  return S;
}

}  // namespace sg
