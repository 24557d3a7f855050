#include "spinglass/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>

#include "spinglass/error.hpp"

namespace sg {

void TwoTimeSolution::resize(int n_, double h_) {
  n = n_;
  h = h_;
  const std::size_t tri = idx(n + 1, 0);
  C.assign(tri, 0.0);
  R.assign(tri, 0.0);
  for (auto* v : {&q, &K, &mu, &L, &H}) v->assign(n + 1, 0.0);
}

double TwoTimeSolution::chi(int i, int j) const {
  double acc = 0.0;
  for (int k = 1; k <= j; ++k) acc += 0.5 * h * (r(i, k - 1) + r(i, k));
  return acc;
}

int grid_steps(double T, double h) {
  if (!(h > 0.0) || !(T > 0.0)) fail(Code::invalid, "T and h must be positive");
  const double x = T / h;
  const int n = int(std::lround(x));
  if (std::fabs(x - n) > 1e-9 * std::max(1.0, x)) fail(Code::invalid, "T/h must be an integer");
  return n;
}

double default_f0_slope(const InitCondition& ic, double beta) {
  const auto& s = ic.spec();
  if (ic.rs()) return 0.5 + beta * ic.v_y(0.0, 1.0);
  return 0.5 + beta * s.q_o * ic.v_x(s.q_o, 1.0) + beta * ic.v_y(s.q_o, 1.0);
}

namespace {

// Right-hand sides of the two-time equations on one slice s_i.
class Kernels {
 public:
  Kernels(const InitCondition& ic, double beta, bool drop_v = false)
      : ic_(ic), m_(ic.mixture()), beta_(beta), drop_v_(drop_v) {
    const auto& s = ic.spec();
    qs2_ = s.q_star * s.q_star;
    rs_ = ic.rs();
    inv_nu1_qs2_ = rs_ ? 0.0 : 1.0 / m_.nu(qs2_, 1);
  }

  // Memory integrals of slice i; fills ac[j] = A_C(i,j), ir[j] = int_t^s R R nu'' du for j <= i,
  // and the one-time values at i (L, A_q, H).
  void slice(const TwoTimeSolution& S, int i, std::vector<double>& ac, std::vector<double>& ir, double& L,
             double& aq, double& H) {
    const double h = S.h;
    nu1_.resize(i + 1);
    nu2_.resize(i + 1);
    a_.resize(i + 1);
    b_.resize(i + 1);
    const double* Ci = &S.C[TwoTimeSolution::idx(i, 0)];
    const double* Ri = &S.R[TwoTimeSolution::idx(i, 0)];
    for (int k = 0; k <= i; ++k) {
      nu1_[k] = m_.nu(Ci[k], 1);
      nu2_[k] = m_.nu(Ci[k], 2);
      b_[k] = Ri[k] * nu2_[k];
      double wk = (i == 0) ? 0.0 : ((k == 0 || k == i) ? 0.5 * h : h);
      a_[k] = wk * b_[k];
    }
    // L(s_i) and the one-time integrals
    const double qi = S.q[i];
    double intRq = 0.0, intRqnu2 = 0.0, intRnu1 = 0.0;
    for (int k = 0; k <= i; ++k) {
      double wk = (i == 0) ? 0.0 : ((k == 0 || k == i) ? 0.5 * h : h);
      intRnu1 += wk * Ri[k] * nu1_[k];
      if (!rs_) {
        intRq += wk * Ri[k] * m_.nu(S.q[k], 1);
        intRqnu2 += wk * Ri[k] * S.q[k] * nu2_[k];
      }
    }
    L = rs_ ? 0.0 : intRq * inv_nu1_qs2_;
    const double co_i = Ci[0];
    const double vx = drop_v_ ? 0.0 : ic_.v_x(qi, co_i), vy = drop_v_ ? 0.0 : ic_.v_y(qi, co_i);
    const double nu1q = rs_ ? 0.0 : m_.nu(qi, 1), nu2q = rs_ ? 0.0 : m_.nu(qi, 2);
    const auto& sp = ic_.spec();
    aq = rs_ ? 0.0 : beta_ * intRqnu2 - beta_ * qs2_ * nu2q * L + qs2_ * vx + sp.q_o * vy;
    H = beta_ * intRnu1 - beta_ * nu1q * L + (drop_v_ ? 0.0 : ic_.v(qi, co_i));

    // sum1[j] = sum_k a_k C(k,j) by contiguous row sweeps; sr[j] = sum_{k>=j} b_k R[k][j]
    ac.assign(i + 1, 0.0);
    ir.assign(i + 1, 0.0);
    for (int r = 0; r <= i; ++r) {
      const double* Cr = &S.C[TwoTimeSolution::idx(r, 0)];
      const double* Rr = &S.R[TwoTimeSolution::idx(r, 0)];
      const double ar = a_[r], br = b_[r];
      double acc = 0.0;
      for (int j = 0; j < r; ++j) {
        ac[j] += ar * Cr[j];
        acc += a_[j] * Cr[j];
        ir[j] += br * Rr[j];
      }
      ac[r] += ar * Cr[r] + acc;
      ir[r] += br * Rr[r];
    }
    const double* Rdiag_i = Ri;
    for (int j = 0; j <= i; ++j) {
      const double* Rj = &S.R[TwoTimeSolution::idx(j, 0)];
      // int_0^{t_j} R(t_j,u) nu'(C(s_i,u)) du
      double s2 = 0.0;
      for (int k = 0; k <= j; ++k) s2 += ((k == 0 || k == j) ? 0.5 : 1.0) * Rj[k] * nu1_[k];
      s2 = (j == 0) ? 0.0 : h * s2;
      double A = beta_ * ac[j] + beta_ * s2;
      if (!rs_) A += -beta_ * S.q[j] * nu2q * L - beta_ * nu1q * (j == i ? L : S.L[j]) + S.q[j] * vx;
      A += S.C[TwoTimeSolution::idx(j, 0)] * vy;
      ac[j] = A;
      // trapezoid over k in [j, i]
      ir[j] = h * (ir[j] - 0.5 * b_[j] * Rj[j] - 0.5 * b_[i] * Rdiag_i[j]);
    }
  }

 private:
  const InitCondition& ic_;
  const Mixture& m_;
  double beta_;
  bool drop_v_;
  double qs2_ = 0.0;
  bool rs_ = true;
  double inv_nu1_qs2_ = 0.0;
  std::vector<double> nu1_, nu2_, a_, b_;
};

struct SliceRhs {
  std::vector<double> fC, fR;
  double fq = 0.0;
  double G = 0.0;  // 1 + 2 beta A_C(s,s)
};

class Stepper {
 public:
  Stepper(const InitCondition& ic, const SolverConfig& cfg)
      : ic_(ic), cfg_(cfg), beta_(cfg.variant == Variant::GradientFlow ? 1.0 : cfg.beta), ker_(ic, beta_, cfg.drop_v) {
    if (cfg.drop_v && !ic.rs()) fail(Code::invalid, "drop_v needs the RS branch");
    if (cfg.variant == Variant::FDynamics) {
      if (!(cfg.ell > 0.0)) fail(Code::invalid, "f-dynamics needs ell > 0");
      a_ = cfg.f0_slope ? *cfg.f0_slope : (cfg.drop_v ? 0.5 : default_f0_slope(ic, beta_));
    }
  }

  TwoTimeSolution run() {
    const int n = grid_steps(cfg_.T, cfg_.h);
    if (cfg_.corrector_iters < 1) fail(Code::invalid, "corrector_iters must be >= 1");
    S_.resize(n, cfg_.h);
    S_.C[0] = 1.0;
    S_.R[0] = 1.0;
    S_.K[0] = 1.0;
    S_.q[0] = ic_.spec().q_o;
    S_.L[0] = 0.0;
    SliceRhs cur, nxt;
    evaluate(0, cur, /*closure=*/true, /*first=*/true);
    const double h = S_.h;
    for (int i = 0; i < n; ++i) {
      const int i1 = i + 1;
      const std::size_t o0 = TwoTimeSolution::idx(i, 0), o1 = TwoTimeSolution::idx(i1, 0);
      for (int j = 0; j <= i; ++j) {
        S_.C[o1 + j] = S_.C[o0 + j] + h * cur.fC[j];
        S_.R[o1 + j] = S_.R[o0 + j] + h * cur.fR[j];
      }
      S_.q[i1] = S_.q[i] + h * cur.fq;
      S_.R[o1 + i1] = 1.0;
      S_.K[i1] = predict_K(i, cur.G);
      S_.C[o1 + i1] = S_.K[i1];
      S_.mu[i1] = S_.mu[i];
      Gprev_ = cur.G;
      const int max_it = cfg_.mu_tol > 0.0 ? 50 : cfg_.corrector_iters;
      for (int it = 0; it < max_it; ++it) {
        const double mu_old = S_.mu[i1];
        evaluate(i1, nxt, true, false);
        for (int j = 0; j <= i; ++j) {
          S_.C[o1 + j] = S_.C[o0 + j] + 0.5 * h * (cur.fC[j] + nxt.fC[j]);
          S_.R[o1 + j] = S_.R[o0 + j] + 0.5 * h * (cur.fR[j] + nxt.fR[j]);
        }
        S_.q[i1] = S_.q[i] + 0.5 * h * (cur.fq + nxt.fq);
        if (cfg_.mu_tol > 0.0 && it + 1 >= cfg_.corrector_iters && std::fabs(S_.mu[i1] - mu_old) < cfg_.mu_tol)
          break;
      }
      evaluate(i1, cur, true, false);
      for (int j = 0; j <= i1; ++j) {
        double c = S_.C[o1 + j], r = S_.R[o1 + j];
        if (!(std::fabs(c) <= 1e6) || !(std::fabs(r) <= 1e6))
          fail(Code::blow_up, "blow-up at s = " + std::to_string(i1 * h));
      }
    }
    return std::move(S_);
  }

 private:
  // one-sided K step; trapezoid, implicit in the stiff part
  double step_K(double Ki, double Gi, double Gi1) const {
    const double h = S_.h, l = cfg_.ell, a = a_;
    const double phi_i = Gi - 2.0 * a * Ki - 4.0 * l * (Ki - 1.0) * Ki;
    const double A = 2.0 * h * l, B = 1.0 + h * a - 2.0 * h * l;
    const double Cc = Ki + 0.5 * h * phi_i + 0.5 * h * Gi1;
    const double disc = std::sqrt(B * B + 4.0 * A * Cc);
    return B > 0.0 ? 2.0 * Cc / (B + disc) : (disc - B) / (2.0 * A);
  }

  double predict_K(int i, double Gi) const {
    if (cfg_.variant != Variant::FDynamics) return 1.0;
    return step_K(S_.K[i], Gi, Gi);
  }

  void evaluate(int i, SliceRhs& out, bool closure, bool first) {
    double L, aq, H;
    ker_.slice(S_, i, ac_, ir_, L, aq, H);
    S_.L[i] = L;
    const double Aii = ac_[i];
    out.G = 1.0 + 2.0 * beta_ * Aii;
    if (closure) {
      switch (cfg_.variant) {
        case Variant::Spherical: S_.mu[i] = 0.5 + beta_ * Aii; break;
        case Variant::GradientFlow: S_.mu[i] = Aii; break;
        case Variant::FDynamics:
          if (!first) {
            S_.K[i] = step_K(S_.K[i - 1], Gprev_, out.G);
            S_.C[TwoTimeSolution::idx(i, i)] = S_.K[i];
          }
          S_.mu[i] = 2.0 * cfg_.ell * (S_.K[i] - 1.0) + a_;
          break;
      }
    }
    // H after L is set; v depends on the slice only
    S_.H[i] = H;
    const double mu = S_.mu[i];
    const std::size_t o = TwoTimeSolution::idx(i, 0);
    out.fC.resize(i + 1);
    out.fR.resize(i + 1);
    for (int j = 0; j <= i; ++j) {
      out.fC[j] = -mu * S_.C[o + j] + beta_ * ac_[j];
      out.fR[j] = -mu * S_.R[o + j] + beta_ * beta_ * ir_[j];
    }
    out.fq = ic_.rs() ? 0.0 : -mu * S_.q[i] + beta_ * aq;
  }

  const InitCondition& ic_;
  SolverConfig cfg_;
  double beta_;
  Kernels ker_;
  double a_ = 0.0;
  double Gprev_ = 0.0;
  TwoTimeSolution S_;
  std::vector<double> ac_, ir_;
};

}  // namespace

TwoTimeSolution solve_dynamics(const InitCondition& ic, const SolverConfig& cfg) {
  if (cfg.variant != Variant::GradientFlow && !(cfg.beta >= 0.0)) fail(Code::invalid, "beta must be >= 0");
  Stepper st(ic, cfg);
  return st.run();
}

Residual residual(const TwoTimeSolution& sol, const InitCondition& ic, const SolverConfig& cfg) {
  const double beta = cfg.variant == Variant::GradientFlow ? 1.0 : cfg.beta;
  Kernels ker(ic, beta, cfg.drop_v);
  const int n = sol.n;
  const double h = sol.h;
  Residual out;
  std::vector<std::vector<double>> fC(n + 1), fR(n + 1);
  std::vector<double> fq(n + 1), ac, ir;
  const double a = cfg.variant == Variant::FDynamics
                       ? (cfg.f0_slope ? *cfg.f0_slope : (cfg.drop_v ? 0.5 : default_f0_slope(ic, beta)))
                       : 0.0;
  for (int i = 0; i <= n; ++i) {
    double L, aq, H;
    ker.slice(sol, i, ac, ir, L, aq, H);
    out.L = std::max(out.L, std::fabs(sol.L[i] - L));
    out.H = std::max(out.H, std::fabs(sol.H[i] - H));
    const double mu = sol.mu[i];
    double closure = 0.0;
    switch (cfg.variant) {
      case Variant::Spherical: closure = 0.5 + beta * ac[i]; break;
      case Variant::GradientFlow: closure = ac[i]; break;
      case Variant::FDynamics: closure = 2.0 * cfg.ell * (sol.K[i] - 1.0) + a; break;
    }
    out.mu = std::max(out.mu, std::fabs(mu - closure));
    fC[i].resize(i + 1);
    fR[i].resize(i + 1);
    for (int j = 0; j <= i; ++j) {
      fC[i][j] = -mu * sol.C[TwoTimeSolution::idx(i, j)] + beta * ac[j];
      fR[i][j] = -mu * sol.R[TwoTimeSolution::idx(i, j)] + beta * beta * ir[j];
    }
    fq[i] = ic.rs() ? 0.0 : -mu * sol.q[i] + beta * aq;
  }
  for (int i = 1; i < n; ++i) {
    for (int j = 0; j < i; ++j) {
      double dC = (sol.C[TwoTimeSolution::idx(i + 1, j)] - sol.C[TwoTimeSolution::idx(i - 1, j)]) / (2 * h);
      double dR = (sol.R[TwoTimeSolution::idx(i + 1, j)] - sol.R[TwoTimeSolution::idx(i - 1, j)]) / (2 * h);
      out.C = std::max(out.C, std::fabs(dC - fC[i][j]));
      out.R = std::max(out.R, std::fabs(dR - fR[i][j]));
    }
    double dq = (sol.q[i + 1] - sol.q[i - 1]) / (2 * h);
    out.q = std::max(out.q, std::fabs(dq - fq[i]));
  }
  return out;
}

PsdReport psd_check(const TwoTimeSolution& sol, const InitCondition& ic, int points, double tol) {
  points = std::max(2, std::min(points, sol.n + 1));
  std::vector<int> ix(points);
  for (int a = 0; a < points; ++a) ix[a] = int(std::lround(double(a) * sol.n / (points - 1)));
  Eigen::MatrixXd G(points, points), Gb(points, points);
  const double qs2 = ic.spec().q_star * ic.spec().q_star;
  for (int a = 0; a < points; ++a)
    for (int b = 0; b < points; ++b) {
      G(a, b) = sol.c(ix[a], ix[b]);
      Gb(a, b) = G(a, b) - (qs2 > 0.0 ? sol.q[ix[a]] * sol.q[ix[b]] / qs2 : 0.0);
    }
  PsdReport r;
  r.min_eig_C = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(G, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  r.min_eig_Cbar =
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(Gb, Eigen::EigenvaluesOnly).eigenvalues().minCoeff();
  r.ok = r.min_eig_C >= -tol && r.min_eig_Cbar >= -tol;
  return r;
}

double Distance::max() const { return std::max({C, R, q, H}); }

Distance sup_distance(const TwoTimeSolution& a, const TwoTimeSolution& b) {
  const double ratio = a.h / b.h;
  const int m = int(std::lround(ratio));
  if (m < 1 || std::fabs(ratio - m) > 1e-9 * ratio) fail(Code::grid_mismatch, "grid mismatch");
  if (b.n < a.n * m) fail(Code::grid_mismatch, "grid mismatch: fine solution too short");
  Distance d;
  for (int i = 0; i <= a.n; ++i) {
    for (int j = 0; j <= i; ++j) {
      d.C = std::max(d.C, std::fabs(a.C[TwoTimeSolution::idx(i, j)] - b.C[TwoTimeSolution::idx(i * m, j * m)]));
      d.R = std::max(d.R, std::fabs(a.R[TwoTimeSolution::idx(i, j)] - b.R[TwoTimeSolution::idx(i * m, j * m)]));
    }
    d.q = std::max(d.q, std::fabs(a.q[i] - b.q[i * m]));
    d.H = std::max(d.H, std::fabs(a.H[i] - b.H[i * m]));
  }
  return d;
}

std::vector<EllRow> ell_limit_check(const InitCondition& ic, double beta, double T, double h,
                                    const std::vector<double>& ells) {
  SolverConfig cfg;
  cfg.beta = beta;
  cfg.T = T;
  cfg.h = h;
  const TwoTimeSolution sp = solve_dynamics(ic, cfg);
  std::vector<EllRow> rows;
  for (double l : ells) {
    SolverConfig fc = cfg;
    fc.variant = Variant::FDynamics;
    fc.ell = l;
    const TwoTimeSolution f = solve_dynamics(ic, fc);
    double k = 0.0;
    for (double v : f.K) k = std::max(k, std::fabs(v - 1.0));
    rows.push_back({l, k, sup_distance(f, sp).max()});
  }
  return rows;
}

}  // namespace sg
