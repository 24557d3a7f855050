#pragma once

#include <Eigen/Dense>
#include <array>

#include "spinglass/mixture.hpp"

namespace sg {

enum class Branch { RS, Generic, PureP, Degenerate, PurePDegenerate };

const char* branch_name(Branch b);

struct InitSpec {
  double q_star = 0.0;
  double E = 0.0;
  double E_star = 0.0;
  double G_star = 0.0;
  double q_o = 0.0;
};

Eigen::Matrix4d sigma_nu(const Mixture& m, double q_star, double q_o);

// (q_star, V) with its solved weights; v(x,y) and its first partials.
class InitCondition {
 public:
  InitCondition(const Mixture& m, const InitSpec& spec);

  double v(double x, double y) const;
  double v_x(double x, double y) const;
  double v_y(double x, double y) const;

  const Mixture& mixture() const { return m_; }
  const InitSpec& spec() const { return s_; }
  Branch branch() const { return branch_; }
  const std::array<double, 4>& w() const { return w_; }
  double alpha() const { return s_.q_star > 0.0 ? s_.q_o / s_.q_star : 0.0; }
  bool rs() const { return branch_ == Branch::RS; }
  // true when PureP forced G_star = p E_star / q_star^2
  bool g_star_adjusted() const { return g_adjusted_; }
  double solve_residual() const { return solve_res_; }

 private:
  Mixture m_;
  InitSpec s_;
  Branch branch_;
  std::array<double, 4> w_{};
  double zden_ = 0.0;  // sqrt(q_star^2 - q_o^2), 0 when z is dropped
  bool g_adjusted_ = false;
  double solve_res_ = 0.0;
};

// Solve Sigma w = vhat for the given geometry, with the pure-p reduction
// (w3 = 0) and the degenerate reductions. Throws singular at |q_o| = 1.
std::array<double, 4> solve_weights(const Mixture& m, double q_star, double q_o, const Eigen::Vector4d& vhat,
                                    double* residual = nullptr);

InitCondition gibbs_init(const Mixture& m, double beta0, double q_ea, double gs_at_qstar);

double gamma_star(const Mixture& m, double beta, double q_star, double alpha);

struct Stationarity {
  bool admissible;
  double residual;
};
Stationarity check_stationary(const InitCondition& ic, double beta);

struct FdtRegime {
  double res_new24;
  bool psd_ok;
};
FdtRegime fdt_regime_residual(const InitCondition& ic, double beta, double alpha, double alpha_hat, double c_inf);

struct Localized {
  double q_minus;
  double q_beta;
  double H_inf;
};
Localized pure_p_localized(const Mixture& m, double beta, double q_c, double gs_at_sqrt_qbeta);

}  // namespace sg
