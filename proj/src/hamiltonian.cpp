#include "spinglass/hamiltonian.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "spinglass/error.hpp"

namespace sg {

namespace {

std::seed_seq make_seq(std::uint64_t seed, std::uint32_t tag) {
  return std::seed_seq{std::uint32_t(seed), std::uint32_t(seed >> 32), tag};
}

std::size_t binom(std::size_t n, int k) {
  if (k < 0 || std::size_t(k) > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace

SpinSystem::SpinSystem(const Mixture& m, int N, std::uint64_t seed, double r_guard)
    : m_(m), N_(N), seed_(seed), r_guard_(r_guard) {
  if (N < 2) fail(Code::invalid, "N must be >= 2");
  if (m.max_degree() > 4) fail(Code::invalid, "finite-N fields support p <= 4");
  std::size_t total = 0;
  for (auto [p, b2] : m.coeffs()) total += binom(N + p - 1, p);
  if (total > std::size_t(3e8)) fail(Code::memory, "coupling storage exceeds the memory guard");

  for (auto [p, b2] : m.coeffs()) {
    Block blk{p, std::sqrt(b2), {}};
    blk.coef.assign(binom(N + p - 1, p), 0.0);
    // colex rank of a_1 <= ... <= a_p is sum_m C(a_m + m - 1, m)
    std::vector<std::vector<std::size_t>> tab(p + 1, std::vector<std::size_t>(N + p, 0));
    for (int mm = 1; mm <= p; ++mm)
      for (int a = 0; a < N; ++a) tab[mm][a] = binom(a + mm - 1, mm);
    auto seq = make_seq(seed, std::uint32_t(p));
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> nd(0.0, std::pow(double(N), -0.5 * (p - 1)));
    std::vector<int> t(p, 0), srt(p);
    for (;;) {
      srt = t;
      std::sort(srt.begin(), srt.end());
      std::size_t k = 0;
      for (int mm = 1; mm <= p; ++mm) k += tab[mm][srt[mm - 1]];
      blk.coef[k] += nd(rng);
      int d = p - 1;
      while (d >= 0 && ++t[d] == N) t[d--] = 0;
      if (d < 0) break;
    }
    blocks_.push_back(std::move(blk));
  }
}

void SpinSystem::guard(const double* x) const {
  double r2 = 0.0;
  for (int i = 0; i < N_; ++i) r2 += x[i] * x[i];
  if (r2 > r_guard_ * r_guard_ * N_) fail(Code::domain, "field evaluated outside the radius guard");
}

double SpinSystem::value(const double* x) const {
  guard(x);
  double H = 0.0;
  const int N = N_;
  for (const Block& B : blocks_) {
    const double* c = B.coef.data();
    double acc = 0.0;
    if (B.p == 2) {
      for (int j = 0; j < N; ++j) {
        double s = 0.0;
        for (int i = 0; i <= j; ++i) s += c[i] * x[i];
        c += j + 1;
        acc += s * x[j];
      }
    } else if (B.p == 3) {
      for (int k = 0; k < N; ++k)
        for (int j = 0; j <= k; ++j) {
          double s = 0.0;
          for (int i = 0; i <= j; ++i) s += c[i] * x[i];
          c += j + 1;
          acc += s * x[j] * x[k];
        }
    } else {
      for (int l = 0; l < N; ++l)
        for (int k = 0; k <= l; ++k)
          for (int j = 0; j <= k; ++j) {
            double s = 0.0;
            for (int i = 0; i <= j; ++i) s += c[i] * x[i];
            c += j + 1;
            acc += s * x[j] * x[k] * x[l];
          }
    }
    H += B.b * acc;
  }
  return H;
}

double SpinSystem::value_grad(const double* x, double* g) const {
  guard(x);
  const int N = N_;
  std::vector<double> gp(N);
  std::fill(g, g + N, 0.0);
  double H = 0.0;
  for (const Block& B : blocks_) {
    std::fill(gp.begin(), gp.end(), 0.0);
    const double* c = B.coef.data();
    double acc = 0.0;
    if (B.p == 2) {
      for (int j = 0; j < N; ++j) {
        double s = 0.0;
        const double xj = x[j];
        for (int i = 0; i <= j; ++i) {
          s += c[i] * x[i];
          gp[i] += c[i] * xj;
        }
        c += j + 1;
        gp[j] += s;
        acc += s * xj;
      }
    } else if (B.p == 3) {
      for (int k = 0; k < N; ++k)
        for (int j = 0; j <= k; ++j) {
          double s = 0.0;
          const double xjk = x[j] * x[k];
          for (int i = 0; i <= j; ++i) {
            s += c[i] * x[i];
            gp[i] += c[i] * xjk;
          }
          c += j + 1;
          gp[j] += s * x[k];
          gp[k] += s * x[j];
          acc += s * xjk;
        }
    } else {
      for (int l = 0; l < N; ++l)
        for (int k = 0; k <= l; ++k)
          for (int j = 0; j <= k; ++j) {
            double s = 0.0;
            const double xjkl = x[j] * x[k] * x[l];
            for (int i = 0; i <= j; ++i) {
              s += c[i] * x[i];
              gp[i] += c[i] * xjkl;
            }
            c += j + 1;
            gp[j] += s * x[k] * x[l];
            gp[k] += s * x[j] * x[l];
            gp[l] += s * x[j] * x[k];
            acc += s * xjkl;
          }
    }
    H += B.b * acc;
    for (int i = 0; i < N; ++i) g[i] += B.b * gp[i];
  }
  return H;
}

ConditioningSpec make_spec(const Eigen::VectorXd& x_star, const Eigen::VectorXd& x0) {
  ConditioningSpec s;
  s.N = int(x0.size());
  const double sqN = std::sqrt(double(s.N));
  if (std::fabs(x0.squaredNorm() / s.N - 1.0) > 1e-9) fail(Code::invalid, "x0 must lie on the sphere of radius sqrt(N)");
  s.x0 = x0;
  s.x_star = x_star.size() ? x_star : Eigen::VectorXd::Zero(s.N);
  if (s.x_star.size() != s.N) fail(Code::invalid, "x_star and x0 differ in dimension");
  s.q_star = s.x_star.norm() / sqN;
  if (s.q_star < 1e-12) {
    s.q_star = 0.0;
    s.xhat = Eigen::VectorXd::Zero(s.N);
    s.zhat = x0 / x0.norm();
    return s;
  }
  if (s.q_star > 1.0 + 1e-12) fail(Code::invalid, "q_star must not exceed 1");
  s.xhat = s.x_star / s.x_star.norm();
  s.q_o = x0.dot(s.x_star) / s.N;
  s.alpha = s.q_o / s.q_star;
  Eigen::VectorXd r = x0 / sqN - s.alpha * s.xhat;
  if (r.norm() > 1e-12) {
    s.zhat = r / r.norm();
  } else {
    int k;
    s.xhat.cwiseAbs().minCoeff(&k);
    Eigen::VectorXd e = Eigen::VectorXd::Unit(s.N, k);
    e -= e.dot(s.xhat) * s.xhat;
    s.zhat = e / e.norm();
  }
  return s;
}

ConditioningSpec sample_band_point(double q_star, double q_o, int N, std::uint64_t seed) {
  if (!(q_star >= 0.0 && q_star <= 1.0)) fail(Code::invalid, "q_star must lie in [0,1]");
  if (std::fabs(q_o) > q_star + 1e-12) fail(Code::invalid, "need |q_o| <= q_star");
  auto seq = make_seq(seed, 0xb0a7u);
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> nd;
  Eigen::VectorXd g(N);
  for (int i = 0; i < N; ++i) g(i) = nd(rng);
  const double sqN = std::sqrt(double(N));
  Eigen::VectorXd xs = Eigen::VectorXd::Zero(N), x0;
  if (q_star == 0.0) {
    x0 = sqN * g / g.norm();
  } else {
    const double a = std::clamp(q_o / q_star, -1.0, 1.0);
    xs(0) = q_star * sqN;
    g(0) = 0.0;
    x0 = sqN * std::sqrt(1.0 - a * a) * g / g.norm();
    x0(0) = a * sqN;
    x0 *= sqN / x0.norm();
  }
  return make_spec(xs, x0);
}

ConditionalMean::ConditionalMean(const ConditioningSpec& spec, const Mixture& m, const Eigen::Vector4d& vhat,
                                 const Eigen::VectorXd& u)
    : s_(spec), m_(m), rs_(spec.q_star == 0.0) {
  if (rs_) {
    w_ = {vhat(0) / m.nu(1.0), 0.0, 0.0, 0.0};
    u_ = Eigen::VectorXd::Zero(spec.N);
    return;
  }
  w_ = solve_weights(m, spec.q_star, spec.q_o, vhat);
  gamma_ = m.nu(spec.q_star * spec.q_star, 1);
  u_ = u.size() ? u : Eigen::VectorXd::Zero(spec.N);
}

double ConditionalMean::value(const Eigen::VectorXd& x) const {
  const double N = s_.N;
  const double y = x.dot(s_.x0) / N;
  if (rs_) return -N * w_[0] * m_.nu(y);
  const double xx = x.dot(s_.x_star) / N;
  const double z = x.dot(s_.zhat) / (s_.q_star * std::sqrt(N));
  const double iq2 = 1.0 / (s_.q_star * s_.q_star);
  const double d1 = m_.nu(xx, 1);
  return -N * (w_[0] * m_.nu(y) + w_[1] * m_.nu(xx) + w_[2] * iq2 * xx * d1 + w_[3] * z * d1) -
         d1 * u_.dot(x) / gamma_;
}

Eigen::VectorXd ConditionalMean::gradient(const Eigen::VectorXd& x) const {
  const double N = s_.N;
  const double y = x.dot(s_.x0) / N;
  if (rs_) return (-w_[0] * m_.nu(y, 1)) * s_.x0;
  const double sq = s_.q_star * std::sqrt(N);
  const double xx = x.dot(s_.x_star) / N;
  const double z = x.dot(s_.zhat) / sq;
  const double iq2 = 1.0 / (s_.q_star * s_.q_star);
  const double d1 = m_.nu(xx, 1), d2 = m_.nu(xx, 2);
  const double ux = u_.dot(x);
  const double fx = w_[1] * d1 + w_[2] * iq2 * m_.psi(xx) + w_[3] * z * d2;
  // a = x_star / N, b = x0 / N, c = zhat / |x_star|
  Eigen::VectorXd g = -(fx + d2 * ux / (gamma_ * N)) * s_.x_star;
  g -= w_[0] * m_.nu(y, 1) * s_.x0;
  g -= (N * w_[3] * d1 / sq) * s_.zhat;
  g -= (d1 / gamma_) * u_;
  return g;
}

Eigen::MatrixXd ConditionalMean::hessian(const Eigen::VectorXd& x) const {
  const double N = s_.N;
  const double y = x.dot(s_.x0) / N;
  if (rs_) return (-w_[0] * m_.nu(y, 2) / N) * s_.x0 * s_.x0.transpose();
  const double sq = s_.q_star * std::sqrt(N);
  const double xx = x.dot(s_.x_star) / N;
  const double z = x.dot(s_.zhat) / sq;
  const double iq2 = 1.0 / (s_.q_star * s_.q_star);
  const double d2 = m_.nu(xx, 2), d3 = m_.nu(xx, 3);
  const double ux = u_.dot(x);
  const Eigen::VectorXd a = s_.x_star / N, b = s_.x0 / N, c = s_.zhat / sq;
  const double faa = N * (w_[1] * d2 + w_[2] * iq2 * m_.psi_prime(xx) + w_[3] * z * d3) + d3 * ux / gamma_;
  Eigen::MatrixXd Hs = -faa * a * a.transpose();
  Hs -= N * w_[0] * m_.nu(y, 2) * b * b.transpose();
  Hs -= N * w_[3] * d2 * (a * c.transpose() + c * a.transpose());
  Hs -= (d2 / gamma_) * (a * u_.transpose() + u_ * a.transpose());
  return Hs;
}

Eigen::MatrixXd ConditionalMean::hessian_closed_form(const Eigen::VectorXd& x) const {
  const double N = s_.N, sN = std::sqrt(N);
  const Eigen::VectorXd& e2 = s_.zhat;
  if (rs_) {
    const double rho0 = x.dot(e2) / sN;
    return (-w_[0] * m_.nu(rho0, 2)) * e2 * e2.transpose();
  }
  const Eigen::VectorXd& e1 = s_.xhat;
  const double qs = s_.q_star, a = s_.alpha, ca = std::sqrt(std::max(0.0, 1.0 - a * a));
  const double x1 = x.dot(e1), x2 = x.dot(e2);
  const double rho = qs * x1 / sN, rho_a = (a * x1 + ca * x2) / sN;
  const double u1 = sN * gamma_ * w_[2] / qs, u2 = sN * gamma_ * w_[3] / qs;
  const double ubx = u1 * x1 + u2 * x2 + u_.dot(x);
  const double d2 = m_.nu(rho, 2), d2a = m_.nu(rho_a, 2);
  const double k = qs / gamma_ * d2 / sN;
  const double H11 = w_[0] * a * a * d2a + 2.0 * k * u1 + w_[1] * qs * qs * d2 + qs * qs * m_.nu(rho, 3) * ubx / (gamma_ * N);
  const double H12 = w_[0] * a * ca * d2a + k * u2;
  const double H22 = w_[0] * (1.0 - a * a) * d2a;
  Eigen::MatrixXd M = H11 * e1 * e1.transpose() + H12 * (e1 * e2.transpose() + e2 * e1.transpose()) +
                      H22 * e2 * e2.transpose() + k * (e1 * u_.transpose() + u_ * e1.transpose());
  return -M;
}

Observed observe(const Field& f, const ConditioningSpec& s) {
  Observed o;
  const double N = s.N;
  o.u = Eigen::VectorXd::Zero(s.N);
  o.vhat.setZero();
  o.vhat(0) = -f.value(s.x0.data()) / N;
  if (s.q_star == 0.0) return o;
  Eigen::VectorXd g(s.N);
  const double Hs = f.value_grad(s.x_star.data(), g.data());
  const double nx = s.x_star.norm();
  const double g1 = s.xhat.dot(g), g2 = s.zhat.dot(g);
  o.vhat(1) = -Hs / N;
  o.vhat(2) = -g1 / nx;
  o.vhat(3) = -g2 / nx;
  o.u = -(g - g1 * s.xhat - g2 * s.zhat);
  return o;
}

namespace {
ConditionalMean observed_mean(const Field& f, const ConditioningSpec& s, const Mixture& m) {
  Observed o = observe(f, s);
  return ConditionalMean(s, m, o.vhat, o.u);
}
Eigen::Vector4d target_of(const InitCondition& ic) {
  const auto& sp = ic.spec();
  return Eigen::Vector4d(sp.E, sp.E_star, sp.G_star, 0.0);
}
}  // namespace

ConditionedField::ConditionedField(const Field& base, const ConditioningSpec& spec, const InitCondition& ic)
    : base_(base),
      spec_(spec),
      obs_(observed_mean(base, spec, ic.mixture())),
      tgt_(spec, ic.mixture(), target_of(ic), Eigen::VectorXd()) {
  const double dq = std::fabs(spec.q_star - ic.spec().q_star) + std::fabs(spec.q_o - ic.spec().q_o);
  if (dq > 1e-9) fail(Code::invalid, "conditioning geometry does not match the initial condition");
}

double ConditionedField::value(const double* x) const {
  Eigen::Map<const Eigen::VectorXd> xv(x, spec_.N);
  return base_.value(x) - obs_.value(xv) + tgt_.value(xv);
}

double ConditionedField::value_grad(const double* x, double* g) const {
  Eigen::Map<const Eigen::VectorXd> xv(x, spec_.N);
  const double H = base_.value_grad(x, g);
  Eigen::Map<Eigen::VectorXd> gv(g, spec_.N);
  gv += tgt_.gradient(xv) - obs_.gradient(xv);
  return H - obs_.value(xv) + tgt_.value(xv);
}

double RotatedField::value(const double* x) const {
  Eigen::Map<const Eigen::VectorXd> xv(x, O_.rows());
  Eigen::VectorXd y = O_.transpose() * xv;
  return base_.value(y.data());
}

double RotatedField::value_grad(const double* x, double* g) const {
  Eigen::Map<const Eigen::VectorXd> xv(x, O_.rows());
  Eigen::VectorXd y = O_.transpose() * xv, gy(O_.rows());
  const double H = base_.value_grad(y.data(), gy.data());
  Eigen::Map<Eigen::VectorXd>(g, O_.rows()) = O_ * gy;
  return H;
}

Eigen::MatrixXd random_orthogonal(int N, std::uint64_t seed) {
  auto seq = make_seq(seed, 0x0a7bu);
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> nd;
  Eigen::MatrixXd A(N, N);
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) A(i, j) = nd(rng);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(A);
  return qr.householderQ();
}

}  // namespace sg
