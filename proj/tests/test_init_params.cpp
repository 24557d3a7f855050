#include <doctest.h>

#include <cmath>
#include <random>

#include "spinglass/error.hpp"
#include "spinglass/init_params.hpp"
#include "spinglass/phase.hpp"

using namespace sg;

TEST_SUITE("init_params") {
  TEST_CASE("sigma example and symmetry") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    Eigen::Matrix4d want;
    want << 2, 0, 0, 0, 0, 2, 5, 0, 0, 5, 13, 0, 0, 0, 0, 5;
    CHECK((sigma_nu(m, 1.0, 0.0) - want).norm() < 1e-14);
    for (double qo : {-0.6, 0.1, 0.7}) {
      const Eigen::Matrix4d S = sigma_nu(m, 0.8, qo);
      CHECK((S - S.transpose()).norm() == 0.0);
      CHECK(Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(S).eigenvalues().minCoeff() > 0.0);
    }
  }

  TEST_CASE("weights") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    auto w = solve_weights(m, 1.0, 0.0, Eigen::Vector4d(1, 0.7, 0.9, 0));
    CHECK(w[0] == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(w[1] == doctest::Approx(4.6).epsilon(1e-13));
    CHECK(w[2] == doctest::Approx(-1.7).epsilon(1e-13));
    CHECK(std::fabs(w[3]) < 1e-14);
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int t = 0; t < 20; ++t) {
      const double qs = 0.2 + 0.8 * std::fabs(u(rng)), qo = 0.95 * qs * u(rng);
      const Eigen::Vector4d V(u(rng), u(rng), u(rng), 0.0);
      auto ww = solve_weights(m, qs, qo, V);
      const Eigen::Vector4d wv(ww[0], ww[1], ww[2], ww[3]);
      CHECK((sigma_nu(m, qs, qo) * wv - V).norm() < 1e-10);
    }
    CHECK_THROWS_AS(solve_weights(m, 1.0, 1.0, Eigen::Vector4d(1, 1, 1, 0)), Error);
  }

  TEST_CASE("v identities") {
    Mixture m({{2, 1.0}, {3, 0.5}});
    InitSpec s{0.8, 0.3, 0.2, 0.9, 0.5};
    InitCondition ic(m, s);
    CHECK(ic.branch() == Branch::Generic);
    CHECK(ic.v(s.q_o, 1.0) == doctest::Approx(s.E).epsilon(1e-12));
    CHECK(std::fabs(ic.v_y(s.q_star * s.q_star, s.q_o)) < 1e-12);
    CHECK(ic.v(0.64, s.q_o) == doctest::Approx(s.E_star).epsilon(1e-12));
    CHECK(ic.v_x(0.64, s.q_o) == doctest::Approx(s.G_star).epsilon(1e-12));
    const double e = 1e-6;
    for (auto [x, y] : {std::pair{0.2, 0.4}, {0.5, 0.1}, {-0.3, 0.6}}) {
      CHECK(std::fabs((ic.v(x + e, y) - ic.v(x - e, y)) / (2 * e) - ic.v_x(x, y)) < 1e-6);
      CHECK(std::fabs((ic.v(x, y + e) - ic.v(x, y - e)) / (2 * e) - ic.v_y(x, y)) < 1e-6);
    }
    InitCondition rs(m, InitSpec{0.0, 0.0, 0.0, 0.0, 0.0});
    CHECK(rs.rs());
    CHECK(rs.v(0.0, 0.7) == 0.0);
  }

  TEST_CASE("branches") {
    Mixture p3({{3, 1.0}});
    InitCondition pp(p3, InitSpec{0.7, 0.3, 0.5, 123.0, 0.4});
    CHECK(pp.branch() == Branch::PureP);
    CHECK(pp.g_star_adjusted());
    CHECK(pp.spec().G_star == doctest::Approx(3 * 0.5 / 0.49));
    Mixture m3({{2, 1.0}, {3, 0.5}, {4, 0.3}});
    InitCondition dg(m3, InitSpec{0.6, 0.3, 0.2, 0.9, 0.6});
    CHECK(dg.branch() == Branch::Degenerate);
    CHECK(dg.w()[3] == 0.0);
    CHECK(dg.v(0.6, 1.0) == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(dg.v(0.36, 0.6) == doctest::Approx(0.2).epsilon(1e-12));
    // radial derivative along x_star moves y too
    CHECK(dg.v_x(0.36, 0.6) + 0.6 / 0.36 * dg.v_y(0.36, 0.6) == doctest::Approx(0.9).epsilon(1e-10));
    // two terms: H(x0), H(x_star) and the radial derivative span a 2-dim space
    Mixture m({{2, 1.0}, {3, 1.0}});
    CHECK_THROWS_AS(InitCondition(m, InitSpec{0.6, 0.3, 0.2, 0.9, 0.6}), Error);
    InitCondition pd(p3, InitSpec{0.6, 0.3, 0.0, 0.0, 0.6});
    CHECK(pd.branch() == Branch::PurePDegenerate);
    CHECK(pd.v(0.5, 0.8) == doctest::Approx(0.3 * 0.512).epsilon(1e-12));
  }

  TEST_CASE("Gibbs parameters") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    const InitCondition rs = gibbs_init(m, 0.2, 0.0, 0.0);
    CHECK(rs.rs());
    CHECK(rs.spec().E == doctest::Approx(0.8));
    const InitCondition a = gibbs_init(m, 0.4, 0.5, -0.3);
    CHECK(a.spec().q_star == doctest::Approx(std::sqrt(0.5)));
    CHECK(a.spec().q_o == doctest::Approx(0.5));
    CHECK(a.spec().E == doctest::Approx(-0.3 + 0.8 * m.theta(0.5)));
    const InitCondition b = gibbs_init(m, 1.0, 0.5, -0.3);
    CHECK(b.spec().G_star == doctest::Approx(6.0).epsilon(1e-14));
  }

  TEST_CASE("gamma star") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    CHECK(gamma_star(m, 0.7, 0.6, 0.0) == doctest::Approx(0.5));
    const double qs = 0.6, b = 0.3;
    CHECK(gamma_star(m, b, qs, qs) == doctest::Approx(0.5 - m.g_beta(b, qs * qs, 1)).epsilon(1e-13));
  }

  TEST_CASE("stationarity") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    const InitCondition ic = gibbs_init(m, 0.2, 0.3, 0.4);
    const auto st = check_stationary(ic, 0.2);
    CHECK(st.admissible);
    CHECK(st.residual < 1e-12);
    const auto ns = check_stationary(ic, 0.3);
    CHECK_FALSE(ns.admissible);
    CHECK(ns.residual > 1e-4);
    CHECK(check_stationary(InitCondition(m, InitSpec{0, 0.4 * m.nu(1.0), 0, 0, 0}), 0.2).admissible);
    CHECK_FALSE(check_stationary(InitCondition(m, InitSpec{}), 0.2).admissible);
  }

  TEST_CASE("FDT regime residual vanishes on Gibbs data") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    const double beta = 0.2;
    const InitCondition ic = gibbs_init(m, beta, 0.3, 0.4);
    const double qs = ic.spec().q_star;
    const double ci = c_inf(m, beta, gamma_star(m, beta, qs, ic.alpha()));
    const FdtRegime r = fdt_regime_residual(ic, beta, ic.alpha(), ic.alpha(), ci);
    CHECK(std::fabs(r.res_new24) < 1e-10);
    CHECK(r.psd_ok);
  }

  TEST_CASE("pure p localized states") {
    Mixture p3({{3, 1.0}});
    const double beta = 1.5, qc = 0.2;
    const Localized L = pure_p_localized(p3, beta, qc, -0.5);
    auto f = [&](double q) { return 2 * beta * std::sqrt(p3.nu(q, 2)) * (1 - q) - std::sqrt(2 * (1 - qc)); };
    CHECK(std::fabs(f(L.q_beta)) < 1e-10);
    CHECK(std::fabs(f(L.q_minus)) < 1e-10);
    CHECK(L.q_minus < 1.0 / 3.0);
    CHECK(L.q_beta > 1.0 / 3.0);
    CHECK_THROWS_AS(pure_p_localized(p3, 0.1, qc, 0.0), Error);
  }
}
