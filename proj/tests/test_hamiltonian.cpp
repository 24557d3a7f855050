#include <doctest.h>

#include <cmath>
#include <random>

#include "spinglass/error.hpp"
#include "spinglass/hamiltonian.hpp"

using namespace sg;

namespace {
Eigen::VectorXd sphere_point(int N, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g;
  Eigen::VectorXd x(N);
  for (int i = 0; i < N; ++i) x(i) = g(rng);
  return x * (std::sqrt(double(N)) / x.norm());
}

double fd_check(const Field& f, const Eigen::VectorXd& x) {
  Eigen::VectorXd g(x.size());
  f.value_grad(x.data(), g.data());
  double err = 0.0;
  const double e = 1e-5;
  for (int i = 0; i < x.size(); ++i) {
    Eigen::VectorXd a = x, b = x;
    a(i) += e;
    b(i) -= e;
    err = std::max(err, std::fabs((f.value(a.data()) - f.value(b.data())) / (2 * e) - g(i)));
  }
  return err / (1.0 + g.cwiseAbs().maxCoeff());
}
}  // namespace

TEST_SUITE("hamiltonian") {
  TEST_CASE("gradient and Euler identity") {
    for (int p : {2, 3, 4}) {
      SpinSystem H(Mixture({{p, 1.0}}), 12, 7 + p);
      const Eigen::VectorXd x = sphere_point(12, 1);
      Eigen::VectorXd g(12);
      const double v = H.value_grad(x.data(), g.data());
      CHECK(v == doctest::Approx(H.value(x.data())).epsilon(1e-13));
      CHECK(x.dot(g) == doctest::Approx(p * v).epsilon(1e-11));
      CHECK(fd_check(H, x) < 1e-7);
    }
    SpinSystem mixed(Mixture({{2, 1.0}, {3, 0.5}, {4, 0.2}}), 9, 3);
    CHECK(fd_check(mixed, sphere_point(9, 4)) < 1e-7);
  }

  TEST_CASE("covariance on the sphere") {
    const Mixture m({{2, 1.0}, {3, 1.0}});
    const int N = 8, reps = 4000;
    const Eigen::VectorXd x = sphere_point(N, 11), y = sphere_point(N, 12);
    const double rxy = x.dot(y) / N;
    double sxx = 0, sxy = 0;
    for (int k = 0; k < reps; ++k) {
      SpinSystem H(m, N, 100 + k);
      const double a = H.value(x.data()), b = H.value(y.data());
      sxx += a * a;
      sxy += a * b;
    }
    sxx /= reps * double(N);
    sxy /= reps * double(N);
    // standard errors are about sqrt(2/reps) nu(1)
    CHECK(std::fabs(sxx - m.nu(1.0)) < 0.12);
    CHECK(std::fabs(sxy - m.nu(rxy)) < 0.12);
  }

  TEST_CASE("same seed same couplings") {
    const Mixture m({{3, 1.0}});
    SpinSystem a(m, 10, 5), b(m, 10, 5), c(m, 10, 6);
    const Eigen::VectorXd x = sphere_point(10, 2);
    CHECK(a.value(x.data()) == b.value(x.data()));
    CHECK(a.value(x.data()) != c.value(x.data()));
    Eigen::VectorXd far = 3.0 * x;
    CHECK_THROWS_AS(a.value(far.data()), Error);
  }

  TEST_CASE("band points") {
    const ConditioningSpec s = sample_band_point(0.8, 0.5, 30, 9);
    CHECK(s.x0.squaredNorm() == doctest::Approx(30.0).epsilon(1e-13));
    CHECK(s.x_star.squaredNorm() == doctest::Approx(0.64 * 30).epsilon(1e-13));
    CHECK(s.x0.dot(s.x_star) / 30 == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(std::fabs(s.xhat.dot(s.zhat)) < 1e-13);
    CHECK(s.zhat.norm() == doctest::Approx(1.0));
    const ConditioningSpec rs = sample_band_point(0.0, 0.0, 30, 9);
    CHECK(rs.q_star == 0.0);
    CHECK(rs.x0.squaredNorm() == doctest::Approx(30.0));
  }

  TEST_CASE("conditional mean derivatives") {
    const Mixture m({{2, 1.0}, {3, 1.0}});
    const int N = 10;
    const ConditioningSpec s = sample_band_point(0.7, 0.3, N, 2);
    Eigen::VectorXd u = sphere_point(N, 3);
    u -= s.xhat.dot(u) * s.xhat + s.zhat.dot(u) * s.zhat;
    const ConditionalMean cm(s, m, Eigen::Vector4d(0.3, 0.2, 1.1, 0.4), u);
    const Eigen::VectorXd x = sphere_point(N, 4);
    const Eigen::VectorXd g = cm.gradient(x);
    const double e = 1e-5;
    double eg = 0, eh = 0;
    const Eigen::MatrixXd Hs = cm.hessian(x);
    for (int i = 0; i < N; ++i) {
      Eigen::VectorXd a = x, b = x;
      a(i) += e;
      b(i) -= e;
      eg = std::max(eg, std::fabs((cm.value(a) - cm.value(b)) / (2 * e) - g(i)));
      eh = std::max(eh, ((cm.gradient(a) - cm.gradient(b)) / (2 * e) - Hs.col(i)).cwiseAbs().maxCoeff());
    }
    CHECK(eg < 1e-7);
    CHECK(eh < 1e-6);
    CHECK((cm.hessian_closed_form(x) - Hs).cwiseAbs().maxCoeff() < 1e-10);
  }

  TEST_CASE("conditioned field hits the target data") {
    const Mixture m({{2, 1.0}, {3, 1.0}});
    const int N = 20;
    const InitCondition ic(m, InitSpec{0.7, 0.3, 0.2, 1.5, 0.4});
    const ConditioningSpec s = sample_band_point(0.7, 0.4, N, 5);
    SpinSystem H(m, N, 77);
    const ConditionedField Hc(H, s, ic);
    const Observed o = observe(Hc, s);
    CHECK((o.vhat - Eigen::Vector4d(0.3, 0.2, 1.5, 0.0)).cwiseAbs().maxCoeff() < 1e-10);
    CHECK(o.u.cwiseAbs().maxCoeff() < 1e-10);
    CHECK(fd_check(Hc, sphere_point(N, 6)) < 1e-7);
    const ConditioningSpec other = sample_band_point(0.6, 0.4, N, 5);
    CHECK_THROWS_AS(ConditionedField(H, other, ic), Error);
  }

  TEST_CASE("rotations") {
    const int N = 15;
    const Eigen::MatrixXd O = random_orthogonal(N, 8);
    CHECK((O.transpose() * O - Eigen::MatrixXd::Identity(N, N)).cwiseAbs().maxCoeff() < 1e-13);
    SpinSystem H(Mixture({{2, 1.0}, {3, 1.0}}), N, 1);
    const RotatedField R(H, O);
    const Eigen::VectorXd x = sphere_point(N, 9);
    const Eigen::VectorXd y = O.transpose() * x;
    CHECK(R.value(x.data()) == doctest::Approx(H.value(y.data())).epsilon(1e-13));
    CHECK(fd_check(R, x) < 1e-7);
  }
}
