#include <doctest.h>

#include <cmath>

#include "spinglass/error.hpp"
#include "spinglass/fdt.hpp"
#include "spinglass/phase.hpp"

using namespace sg;

TEST_SUITE("fdt") {
  TEST_CASE("beta = 0 closed form") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    for (double g : {0.5, 1.0, 2.0}) {
      const FdtSolution f = solve_fdt(m, 0.0, g, 6.0, 0.01);
      double err = 0.0;
      for (std::size_t k = 0; k < f.c.size(); ++k) {
        const double t = k * f.h;
        err = std::max(err, std::fabs(f.c[k] - (1.0 - (1.0 - std::exp(-g * t)) / (2.0 * g))));
      }
      CHECK(err < 1e-5);
      CHECK(f.c_inf == doctest::Approx(1.0 - 0.5 / g).epsilon(1e-5));
    }
  }

  TEST_CASE("second order in h") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    const double beta = 0.25, g = 0.5, T = 4.0;
    const FdtSolution ref = solve_fdt(m, beta, g, T, 0.0025);
    double e[2];
    int i = 0;
    for (double h : {0.04, 0.02}) {
      const FdtSolution f = solve_fdt(m, beta, g, T, h);
      const int r = int(std::lround(h / ref.h));
      double err = 0.0;
      for (std::size_t k = 0; k < f.c.size(); ++k) err = std::max(err, std::fabs(f.c[k] - ref.c[k * r]));
      e[i++] = err;
    }
    CHECK(e[0] / e[1] > 3.0);
    CHECK(e[0] / e[1] < 5.0);
  }

  TEST_CASE("plateau at c_inf") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    const FdtSolution f = solve_fdt(m, 0.2, 1.0, 40.0, 0.01);
    CHECK(std::fabs(f.c.back() - f.c_inf) < 1e-4);
    CHECK(f.plateau_time > 0.0);
    CHECK_FALSE(f.plateau_warning);
    for (std::size_t k = 1; k < f.c.size(); ++k) REQUIRE(f.c[k] <= f.c[k - 1] + 1e-14);
  }

  TEST_CASE("gamma too small") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    try {
      solve_fdt(m, 0.2, 0.01, 1.0, 0.01);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == Code::gamma_too_small);
    }
  }

  TEST_CASE("stationary two-time needs admissible data") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    const InitCondition rs(m, InitSpec{0, 2 * 0.2 * m.nu(1.0), 0, 0, 0});
    const FdtSolution f = solve_fdt(m, 0.2, 0.5, 1.0, 0.05);
    const TwoTimeSolution S = stationary_two_time(f, rs);
    CHECK(S.c(4, 1) == f.c[3]);
    CHECK(S.r(4, 4) == 1.0);
    CHECK(S.H[7] == rs.spec().E);
    CHECK_THROWS_AS(stationary_two_time(f, InitCondition(m, InitSpec{})), Error);
    const FdtSolution wrong = solve_fdt(m, 0.2, 0.7, 1.0, 0.05);
    CHECK_THROWS_AS(stationary_two_time(wrong, rs), Error);
  }
}
