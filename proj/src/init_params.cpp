#include "spinglass/init_params.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "spinglass/error.hpp"

namespace sg {

namespace {
constexpr double kDegTol = 1e-12;
}

const char* branch_name(Branch b) {
  switch (b) {
    case Branch::RS: return "RS";
    case Branch::Generic: return "Generic";
    case Branch::PureP: return "PureP";
    case Branch::Degenerate: return "Degenerate";
    case Branch::PurePDegenerate: return "PurePDegenerate";
  }
  return "?";
}

Eigen::Matrix4d sigma_nu(const Mixture& m, double q_star, double q_o) {
  if (!(q_star > 0.0)) fail(Code::domain, "sigma_nu needs q_star > 0");
  if (std::fabs(q_o) > q_star + kDegTol) fail(Code::domain, "sigma_nu needs |q_o| <= q_star");
  const double qs2 = q_star * q_star, iq2 = 1.0 / qs2;
  const double s = std::sqrt(std::max(0.0, qs2 - q_o * q_o));
  const double d1o = m.nu(q_o, 1);
  Eigen::Matrix4d S;
  S << m.nu(1.0), m.nu(q_o), q_o * iq2 * d1o, iq2 * s * d1o,
       m.nu(q_o), m.nu(qs2), m.nu(qs2, 1), 0.0,
       q_o * iq2 * d1o, m.nu(qs2, 1), iq2 * m.psi(qs2), 0.0,
       iq2 * s * d1o, 0.0, 0.0, iq2 * m.nu(qs2, 1);
  return S;
}

namespace {

Eigen::VectorXd spd_solve(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double& res) {
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  Eigen::VectorXd x;
  if (llt.info() == Eigen::Success) {
    x = llt.solve(b);
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    x = cod.solve(b);  // minimum norm; inconsistent data fail the residual check
  }
  res = (A * x - b).norm();
  if (!(res <= 1e-8 * (1.0 + b.norm()))) fail(Code::singular, "weight system residual too large");
  return x;
}

}  // namespace

std::array<double, 4> solve_weights(const Mixture& m, double q_star, double q_o, const Eigen::Vector4d& vhat,
                                    double* residual) {
  if (std::fabs(std::fabs(q_o) - 1.0) < kDegTol) fail(Code::singular, "singular-matrix: |q_o| = 1");
  const Eigen::Matrix4d S = sigma_nu(m, q_star, q_o);
  const bool pure = m.pure_degree() > 0;
  const bool degen = std::fabs(q_star - std::fabs(q_o)) < kDegTol;
  std::array<double, 4> w{};
  double res = 0.0;
  if (pure && degen) {
    w[0] = vhat(0) / m.nu(1.0);
  } else if (pure) {
    const int idx[3] = {0, 1, 3};
    Eigen::Matrix3d A;
    Eigen::Vector3d b;
    for (int i = 0; i < 3; ++i) {
      b(i) = vhat(idx[i]);
      for (int j = 0; j < 3; ++j) A(i, j) = S(idx[i], idx[j]);
    }
    Eigen::VectorXd x = spd_solve(A, b, res);
    w = {x(0), x(1), 0.0, x(2)};
  } else if (degen) {
    Eigen::VectorXd x = spd_solve(S.topLeftCorner<3, 3>(), vhat.head<3>(), res);
    w = {x(0), x(1), x(2), 0.0};
  } else {
    Eigen::VectorXd x = spd_solve(S, vhat, res);
    w = {x(0), x(1), x(2), x(3)};
  }
  if (residual) *residual = res;
  return w;
}

InitCondition::InitCondition(const Mixture& m, const InitSpec& spec) : m_(m), s_(spec) {
  if (!(s_.q_star >= 0.0 && s_.q_star <= 1.0)) fail(Code::invalid, "q_star must lie in [0,1]");
  if (s_.q_star < kDegTol) {
    branch_ = Branch::RS;
    s_.q_star = 0.0;
    s_.E_star = s_.G_star = s_.q_o = 0.0;
    w_ = {s_.E / m_.nu(1.0), 0.0, 0.0, 0.0};
    return;
  }
  if (std::fabs(s_.q_o) > s_.q_star + kDegTol) fail(Code::invalid, "need |q_o| <= q_star");
  const bool degen = std::fabs(s_.q_star - std::fabs(s_.q_o)) < kDegTol;
  const int p = m_.pure_degree();
  if (p > 0) {
    double g = p * s_.E_star / (s_.q_star * s_.q_star);
    if (std::fabs(g - s_.G_star) > 1e-12 * (1.0 + std::fabs(g))) {
      s_.G_star = g;
      g_adjusted_ = true;
    }
    branch_ = degen ? Branch::PurePDegenerate : Branch::PureP;
  } else {
    branch_ = degen ? Branch::Degenerate : Branch::Generic;
  }
  Eigen::Vector4d vhat(s_.E, s_.E_star, s_.G_star, 0.0);
  w_ = solve_weights(m_, s_.q_star, s_.q_o, vhat, &solve_res_);
  zden_ = degen ? 0.0 : std::sqrt(s_.q_star * s_.q_star - s_.q_o * s_.q_o);
}

double InitCondition::v(double x, double y) const {
  const auto& w = w_;
  if (branch_ == Branch::RS) return w[0] * m_.nu(y);
  const double iq2 = 1.0 / (s_.q_star * s_.q_star);
  double out = w[0] * m_.nu(y) + w[1] * m_.nu(x) + w[2] * iq2 * x * m_.nu(x, 1);
  if (zden_ > 0.0) {
    double z = (y - s_.q_o * iq2 * x) / zden_;
    out += w[3] * z * m_.nu(x, 1);
  }
  return out;
}

double InitCondition::v_x(double x, double y) const {
  const auto& w = w_;
  if (branch_ == Branch::RS) return 0.0;
  const double iq2 = 1.0 / (s_.q_star * s_.q_star);
  double out = w[1] * m_.nu(x, 1) + w[2] * iq2 * m_.psi(x);
  if (zden_ > 0.0) {
    double z = (y - s_.q_o * iq2 * x) / zden_;
    double zx = -s_.q_o * iq2 / zden_;
    out += w[3] * (zx * m_.nu(x, 1) + z * m_.nu(x, 2));
  }
  return out;
}

double InitCondition::v_y(double x, double y) const {
  const auto& w = w_;
  double out = w[0] * m_.nu(y, 1);
  if (branch_ != Branch::RS && zden_ > 0.0) out += w[3] * m_.nu(x, 1) / zden_;
  return out;
}

InitCondition gibbs_init(const Mixture& m, double beta0, double q_ea, double gs_at_qstar) {
  if (!(beta0 > 0.0)) fail(Code::invalid, "beta0 must be positive");
  if (!(q_ea >= 0.0 && q_ea < 1.0)) fail(Code::invalid, "q_EA must lie in [0,1)");
  InitSpec s;
  if (q_ea == 0.0) {
    s.E = 2.0 * beta0 * m.nu(1.0);
    return InitCondition(m, s);
  }
  const double qs2 = q_ea;
  s.q_star = std::sqrt(q_ea);
  s.q_o = q_ea;
  s.E_star = gs_at_qstar;
  s.G_star = 1.0 / (2.0 * beta0 * (1.0 - qs2)) + 2.0 * beta0 * (1.0 - qs2) * m.nu(qs2, 2);
  s.E = s.E_star + 2.0 * beta0 * m.theta(qs2);
  return InitCondition(m, s);
}

double gamma_star(const Mixture& m, double beta, double q_star, double alpha) {
  if (!(std::fabs(alpha) < 1.0)) fail(Code::domain, "gamma_star needs |alpha| < 1");
  if (!(q_star > 0.0)) fail(Code::domain, "gamma_star needs q_star > 0");
  const double d = m.nu(alpha * q_star, 1);
  return 0.5 / (1.0 - alpha * alpha) - 2.0 * beta * beta * d * d / m.nu(q_star * q_star, 1);
}

Stationarity check_stationary(const InitCondition& ic, double beta) {
  const Mixture& m = ic.mixture();
  const InitSpec& s = ic.spec();
  if (ic.rs()) {
    double r = std::fabs(s.E - 2.0 * beta * m.nu(1.0));
    return {r < 1e-8 * (1.0 + std::fabs(s.E)), r};
  }
  const double a = ic.alpha();
  if (!(std::fabs(a) < 1.0)) return {false, std::numeric_limits<double>::infinity()};
  const double qs = s.q_star, qs2 = qs * qs, aq = a * qs;
  const double b_a = m.nu(aq, 1) / m.nu(qs2, 1);
  Eigen::Vector4d lhs;
  lhs << s.E - 2.0 * beta * (m.nu(1.0) - (1.0 - a * a) * m.nu(aq, 1) * b_a),
      s.E_star - 2.0 * beta * m.nu(aq),
      qs * s.G_star - 2.0 * beta * a * m.nu(aq, 1),
      a / (2.0 * beta * (1.0 - a * a)) - 2.0 * beta * b_a * (a * m.psi(aq) - qs * m.nu(aq, 2));
  Eigen::Matrix<double, 4, 2> A;
  A << m.nu(aq), aq * m.nu(aq, 1),
       m.nu(qs2), qs2 * m.nu(qs2, 1),
       qs * m.nu(qs2, 1), qs * m.psi(qs2),
       qs * m.nu(aq, 1), qs * m.psi(aq);
  Eigen::Vector2d c = A.colPivHouseholderQr().solve(lhs);
  double r = (lhs - A * c).norm();
  return {r < 1e-8 * (1.0 + lhs.norm()), r};
}

FdtRegime fdt_regime_residual(const InitCondition& ic, double beta, double alpha, double alpha_hat, double c_inf) {
  const Mixture& m = ic.mixture();
  const InitSpec& s = ic.spec();
  if (!(s.q_star > 0.0)) fail(Code::domain, "fdt_regime_residual needs q_star > 0");
  const double gamma = 0.5 - m.g_beta(beta, c_inf, 1);
  const double mu = m.phi_gamma(beta, gamma, 1.0);
  const double k1 = 2.0 * (m.nu(1.0, 1) - m.nu(c_inf, 1));
  const double k2 = 2.0 * (1.0 - c_inf);
  const double a_o = s.q_o / s.q_star;
  const double x = alpha * s.q_star, y = alpha_hat * a_o;
  const double rhs = beta * s.q_o * ic.v_x(x, y) + beta * ic.v_y(x, y) -
                     beta * beta * s.q_o * m.nu(x, 2) * m.nu(x, 1) / m.nu(s.q_star * s.q_star, 1) * k2 +
                     beta * beta * y * k1;
  FdtRegime r;
  r.res_new24 = mu * y - rhs;
  const double d = alpha_hat - alpha;
  r.psd_ok = d * d * a_o * a_o <= (c_inf - alpha * alpha) * (1.0 - a_o * a_o) + 1e-14;
  return r;
}

Localized pure_p_localized(const Mixture& m, double beta, double q_c, double gs_at_sqrt_qbeta) {
  const int p = m.pure_degree();
  if (p == 0) fail(Code::invalid, "pure_p_localized needs a pure p-spin mixture");
  if (!(q_c > 0.0 && q_c < 1.0)) fail(Code::invalid, "q_c must lie in (0,1)");
  auto lhs = [&](double q) { return 2.0 * beta * std::sqrt(m.nu(q, 2)) * (1.0 - q); };
  const double rhs = std::sqrt((p - 1) * (1.0 - q_c));
  const double qm = double(p - 2) / p;
  if (lhs(qm) < rhs) fail(Code::no_root, "no-root: beta too small for a localized state");
  auto bisect = [&](double lo, double hi, bool increasing) {
    for (int it = 0; it < 200 && hi - lo > 1e-16; ++it) {
      double mid = 0.5 * (lo + hi);
      if ((lhs(mid) < rhs) == increasing)
        lo = mid;
      else
        hi = mid;
    }
    return 0.5 * (lo + hi);
  };
  Localized out;
  out.q_minus = qm > 0.0 ? bisect(0.0, qm, true) : 0.0;
  out.q_beta = bisect(qm, 1.0, false);
  out.H_inf = gs_at_sqrt_qbeta + 2.0 * beta * m.theta(out.q_beta);
  return out;
}

}  // namespace sg
