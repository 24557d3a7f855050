#include <doctest.h>

#include <cmath>

#include "spinglass/dynamics.hpp"
#include "spinglass/error.hpp"
#include "spinglass/fdt.hpp"

using namespace sg;

TEST_SUITE("dynamics") {
  TEST_CASE("grid") {
    CHECK(grid_steps(1.0, 0.01) == 100);
    CHECK(grid_steps(2.0, 0.05) == 40);
    CHECK_THROWS_AS(grid_steps(1.0, 0.3), Error);
  }

  TEST_CASE("beta = 0 is the spherical OU process") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    const InitCondition ic(m, InitSpec{});
    SolverConfig cfg;
    cfg.T = 3.0;
    cfg.h = 0.01;
    const TwoTimeSolution S = solve_dynamics(ic, cfg);
    double eC = 0, eR = 0;
    for (int i = 0; i <= S.n; ++i)
      for (int j = 0; j <= i; ++j) {
        const double ex = std::exp(-0.5 * (i - j) * S.h);
        eC = std::max(eC, std::fabs(S.c(i, j) - ex));
        eR = std::max(eR, std::fabs(S.r(i, j) - ex));
      }
    CHECK(eC < 1e-4);
    CHECK(eR < 1e-4);
    for (int i = 0; i <= S.n; ++i) REQUIRE(std::fabs(S.K[i] - 1.0) < 1e-12);
    CHECK(psd_check(S, ic).ok);
  }

  TEST_CASE("Gibbs start reproduces the stationary solution") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    const double beta = 0.2;
    const InitCondition ic = gibbs_init(m, beta, 0.3, 0.4);
    SolverConfig cfg;
    cfg.beta = beta;
    cfg.T = 2.0;
    cfg.h = 0.01;
    const TwoTimeSolution S = solve_dynamics(ic, cfg);
    const double g = gamma_star(m, beta, ic.spec().q_star, ic.alpha());
    const TwoTimeSolution F = stationary_two_time(solve_fdt(m, beta, g, cfg.T, cfg.h), ic);
    const Distance d = sup_distance(S, F);
    CHECK(d.max() < 1e-3);
    const Residual r = residual(S, ic, cfg);
    CHECK(r.C < 1e-3);
    CHECK(r.R < 1e-3);
  }

  TEST_CASE("self distance and grid checks") {
    Mixture m({{2, 1.0}});
    const InitCondition ic(m, InitSpec{0.7, 0.1, 0.2, 0.9, 0.3});
    SolverConfig cfg;
    cfg.beta = 0.3;
    cfg.T = 1.2;
    cfg.h = 0.02;
    const TwoTimeSolution a = solve_dynamics(ic, cfg);
    const TwoTimeSolution b = solve_dynamics(ic, cfg);
    CHECK(a.C == b.C);
    CHECK(sup_distance(a, a).max() == 0.0);
    cfg.h = 0.03;
    const TwoTimeSolution c = solve_dynamics(ic, cfg);
    CHECK_THROWS_AS(sup_distance(a, c), Error);
  }

  TEST_CASE("chi is the trapezoid of R") {
    Mixture m({{2, 1.0}});
    const InitCondition ic(m, InitSpec{});
    SolverConfig cfg;
    cfg.beta = 0.2;
    cfg.h = 0.05;
    const TwoTimeSolution S = solve_dynamics(ic, cfg);
    double t = 0.0;
    for (int k = 1; k <= 6; ++k) t += 0.5 * S.h * (S.r(10, k - 1) + S.r(10, k));
    CHECK(S.chi(10, 6) == doctest::Approx(t).epsilon(1e-13));
    CHECK(S.chi(10, 0) == 0.0);
  }

  TEST_CASE("classical path only on RS") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    SolverConfig cfg;
    cfg.beta = 0.2;
    cfg.drop_v = true;
    cfg.T = 0.5;
    CHECK_NOTHROW(solve_dynamics(InitCondition(m, InitSpec{}), cfg));
    CHECK_THROWS_AS(solve_dynamics(InitCondition(m, InitSpec{0.5, 0.1, 0.1, 1.0, 0.2}), cfg), Error);
  }

  TEST_CASE("f-dynamics tends to the spherical one") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    const InitCondition ic(m, InitSpec{});
    const auto rows = ell_limit_check(ic, 0.3, 1.0, 0.01, {10.0, 40.0});
    REQUIRE(rows.size() == 2);
    CHECK(rows[1].sup_K_minus_1 < rows[0].sup_K_minus_1);
    CHECK(rows[1].dist_to_spherical < rows[0].dist_to_spherical);
  }
}
