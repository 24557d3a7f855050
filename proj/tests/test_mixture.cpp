#include <doctest.h>

#include <cmath>
#include <random>

#include "spinglass/error.hpp"
#include "spinglass/mixture.hpp"

using namespace sg;

TEST_SUITE("mixture") {
  TEST_CASE("values and derivatives") {
    Mixture p2({{2, 1.0}}), m({{2, 1.0}, {3, 1.0}});
    CHECK(p2.nu(0.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(m.nu(1.0, 1) == doctest::Approx(5.0));
    CHECK(m.nu(1.0, 2) == doctest::Approx(8.0));
    CHECK(m.psi(1.0) == doctest::Approx(13.0));
    CHECK(m.psi(0.0) == 0.0);
    CHECK(p2.psi(0.5) == doctest::Approx(2.0));
    CHECK(m.theta(1.0) == 0.0);
    CHECK(p2.theta(0.0) == doctest::Approx(1.0));
    CHECK(m.theta(0.5) == doctest::Approx(0.75).epsilon(1e-15));
  }

  TEST_CASE("finite differences and psi identity") {
    Mixture m({{2, 0.7}, {3, 0.4}, {5, 0.2}, {6, 0.05}});
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> u(-0.9, 0.9);
    const double e = 1e-5;
    for (int t = 0; t < 100; ++t) {
      const double r = u(rng);
      for (int k = 0; k < 3; ++k) {
        const double fd = (m.nu(r + e, k) - m.nu(r - e, k)) / (2 * e);
        CHECK(std::fabs(fd - m.nu(r, k + 1)) <= 1e-6 * (1.0 + std::fabs(fd)));
      }
      CHECK(m.psi(r) == doctest::Approx(m.nu(r, 1) + r * m.nu(r, 2)).epsilon(1e-13));
      CHECK(m.psi_prime(r) == doctest::Approx(2 * m.nu(r, 2) + r * m.nu(r, 3)).epsilon(1e-13));
      const double x = std::fabs(r);
      CHECK(m.theta(x) >= -1e-15);
    }
  }

  TEST_CASE("g_beta and phi_gamma") {
    Mixture p2({{2, 1.0}}), m({{2, 1.0}, {3, 1.0}});
    for (double b : {0.1, 0.7, 2.0}) {
      CHECK(m.g_beta(b, 0.0, 0) == 0.0);
      CHECK(m.g_beta(b, 0.0, 1) == 0.0);
    }
    CHECK(p2.g_beta(1.0, 0.5, 1) == doctest::Approx(1.5));
    CHECK(p2.g_beta(1.0, 0.0, 2) == doctest::Approx(3.5));
    CHECK_THROWS_AS(p2.g_beta(1.0, 1.0, 0), Error);
    CHECK(m.phi_gamma(0.0, 0.0, 0.4) == 0.0);
    CHECK(p2.phi_gamma(1.0, 0.5, 1.0) == doctest::Approx(4.5));
    CHECK(m.phi_gamma(1.0, 0.0, 0.0) == 0.0);
    // small-x branch agrees with the direct formula
    const double x = 1e-4;
    CHECK(m.g_beta(0.3, x, 0) ==
          doctest::Approx(2 * 0.09 * m.nu(x) + 0.5 * x + 0.5 * std::log1p(-x)).epsilon(1e-9));
  }

  TEST_CASE("effective mixture") {
    Mixture p2({{2, 1.0}}), m({{2, 1.0}, {3, 0.5}, {4, 0.25}});
    CHECK(m.effective(0.0).coeffs() == m.coeffs());
    const Mixture e = p2.effective(0.5);
    REQUIRE(e.coeffs().size() == 1);
    CHECK(e.coeffs().at(2) == doctest::Approx(0.25));
    for (double q : {0.1, 0.35, 0.8}) {
      const Mixture mq = m.effective(q);
      for (auto [p, c] : mq.coeffs()) CHECK(c >= 0.0);
      const double x = 0.3;
      const double direct = m.nu(q + (1 - q) * x) - m.nu(q) - (1 - q) * m.nu(q, 1) * x;
      CHECK(std::fabs(mq.nu(x) - direct) < 1e-12);
    }
  }

  TEST_CASE("truncate and validation") {
    Mixture m({{2, 1.0}, {3, 1.0}});
    CHECK(m.truncate(5).coeffs() == m.coeffs());
    CHECK(m.truncate(2).pure_degree() == 2);
    CHECK_THROWS_AS(Mixture({{2, 1.0}}).truncate(1), Error);
    CHECK_THROWS_AS(Mixture({{1, 1.0}}), Error);
    CHECK_THROWS_AS(Mixture({{2, -1.0}}), Error);
    CHECK_THROWS_AS(Mixture({{2, 0.0}}), Error);
    CHECK(Mixture({{2, 1.0}, {4, 2.0}}).even());
    CHECK_FALSE(m.even());
  }
}
