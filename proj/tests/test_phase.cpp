#include <doctest.h>

#include <cmath>
#include <random>

#include "spinglass/error.hpp"
#include "spinglass/phase.hpp"

using namespace sg;

// pure 3-spin thresholds from an independent oracle (tangency solve of g = g' = 0 at 30 digits;
// the dynamic one is 1/sqrt(3) in closed form)
static constexpr double kPure3Stat = 0.6032778672840177;
static constexpr double kPure3Dyn = 0.5773502691896258;

TEST_SUITE("phase") {
  TEST_CASE("critical temperatures") {
    Mixture p2({{2, 1.0}}), p3({{3, 1.0}});
    CHECK(beta_c_stat(p2) == doctest::Approx(1.0 / (2 * std::sqrt(2.0))).epsilon(1e-10));
    CHECK(beta_c_dyn(p2) == doctest::Approx(1.0 / (2 * std::sqrt(2.0))).epsilon(1e-10));
    CHECK(beta_c_stat(p3) == doctest::Approx(kPure3Stat).epsilon(1e-7));
    CHECK(beta_c_dyn(p3) == doctest::Approx(kPure3Dyn).epsilon(1e-7));
    Mixture m({{2, 1.0}, {3, 1.0}});
    CHECK(beta_c_stat(m.scaled(4.0)) == doctest::Approx(beta_c_stat(m) / 2.0).epsilon(1e-10));
  }

  TEST_CASE("dynamic below static on random mixtures") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    std::uniform_int_distribution<int> p(2, 10);
    for (int t = 0; t < 20; ++t) {
      Mixture m({{p(rng), u(rng)}, {p(rng), u(rng)}});
      CHECK(beta_c_dyn(m) <= beta_c_stat(m) * (1 + 1e-12));
    }
    CHECK(beta_c_dyn(Mixture({{3, 1.0}})) < beta_c_stat(Mixture({{3, 1.0}})));
  }

  TEST_CASE("q_d and c_inf") {
    Mixture p2({{2, 1.0}}), m({{2, 1.0}, {3, 1.0}});
    CHECK(q_d(p2, 1.0) == doctest::Approx(7.0 / 8.0).epsilon(1e-10));
    const double bd = beta_c_dyn(m);
    CHECK(q_d(m, 0.9 * bd) == 0.0);
    CHECK(q_d(m, 1.1 * bd) > 0.0);
    for (double b : {0.2, 0.5, 0.9}) CHECK(c_inf(m, b, 0.5) == doctest::Approx(q_d(m, b)).epsilon(1e-12));
    CHECK(c_inf(m, 0.9 * bd, 0.5) == 0.0);
    CHECK_THROWS_AS(c_inf(m, 0.2, 0.01), Error);
  }

  TEST_CASE("band relaxation") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    const auto r0 = band_relaxation_predicate(m, 0.2, 0.0);
    CHECK(r0.gamma_beta == doctest::Approx(0.5));
    const auto lo = band_relaxation_predicate(m, 0.25, 0.3);
    CHECK(lo.fast_predicted);
    CHECK(lo.fast);
  }

  TEST_CASE("phase point") {
    Mixture p2({{2, 1.0}});
    const double bd = beta_c_dyn(p2), bs = beta_c_stat(p2);
    CHECK(phase_point(p2, 0.2, bd, bs).regime == Regime::RS);
    CHECK(phase_point(p2, 0.5, bd, bs).regime == Regime::RSB);
  }
}
