#include <doctest.h>

#include <cmath>

#include "spinglass/error.hpp"
#include "spinglass/langevin.hpp"

using namespace sg;

namespace {
// observables read off a limiting solution, chi by trapezoid
ObservableSet from_solution(const TwoTimeSolution& S) {
  ObservableSet o;
  o.n = S.n;
  o.h = S.h;
  o.C = S.C;
  o.chi.assign(S.C.size(), 0.0);
  for (int i = 0; i <= S.n; ++i)
    for (int j = 0; j <= i; ++j) o.chi[TwoTimeSolution::idx(i, j)] = S.chi(i, j);
  o.q = S.q;
  o.H = S.H;
  o.K = S.K;
  return o;
}
}  // namespace

TEST_SUITE("langevin") {
  TEST_CASE("reproducible paths") {
    const Mixture m({{2, 1.0}, {3, 1.0}});
    SpinSystem H(m, 30, 1);
    const ConditioningSpec s = sample_band_point(0.6, 0.2, 30, 2);
    SdeConfig cfg;
    cfg.beta = 0.3;
    cfg.T = 0.5;
    cfg.seed = 42;
    const Trajectory a = integrate(H, s, cfg), b = integrate(H, s, cfg);
    REQUIRE(a.x.size() == 11);
    CHECK(a.x.back() == b.x.back());
    CHECK(a.B.back() == b.B.back());
    cfg.seed = 43;
    const Trajectory c = integrate(H, s, cfg);
    CHECK((a.x.back() - c.x.back()).norm() > 1e-3);
    for (const auto& x : a.x) REQUIRE(x.squaredNorm() == doctest::Approx(30.0).epsilon(1e-12));
    CHECK(a.x[0] == s.x0);
    CHECK(a.B[0].norm() == 0.0);
  }

  TEST_CASE("error functional") {
    const Mixture m({{2, 1.0}});
    SolverConfig sc;
    sc.beta = 0.2;
    sc.T = 1.0;
    sc.h = 0.05;
    const TwoTimeSolution S = solve_dynamics(InitCondition(m, InitSpec{}), sc);
    const ObservableSet o = from_solution(S);
    const ErrorTerms e = error_functional(o, S, 1.0);
    CHECK(e.total < 1e-14);
    ObservableSet shifted = o;
    for (double& c : shifted.C) c += 0.3;
    CHECK(error_functional(shifted, S, 1.0).C == doctest::Approx(0.3));
    for (double& c : shifted.C) c += 5.0;
    CHECK(error_functional(shifted, S, 1.0).total == doctest::Approx(1.0));
    sc.h = 0.02;
    const TwoTimeSolution S2 = solve_dynamics(InitCondition(m, InitSpec{}), sc);
    CHECK_THROWS_AS(error_functional(o, S2, 1.0), Error);
    CHECK_THROWS_AS(error_functional(o, S, 2.0), Error);
  }

  TEST_CASE("beta = 0 matches the OU limit") {
    const Mixture m({{2, 1.0}});
    const int N = 400;
    SpinSystem H(m, N, 3);
    const ConditioningSpec s = sample_band_point(0.0, 0.0, N, 4);
    SdeConfig cfg;
    cfg.T = 2.0;
    cfg.seed = 5;
    SolverConfig sc;
    sc.T = 2.0;
    sc.h = 0.01;
    const TwoTimeSolution S = solve_dynamics(InitCondition(m, InitSpec{}), sc);
    const Ensemble en = run_paths(H, s, cfg, 8);
    CHECK(en.escaped_count == 0);
    const ErrorTerms e = error_functional(en.mean, S, 2.0);
    CHECK(e.C < 0.05);
    CHECK(e.chi < 0.05);
    CHECK(e.q == 0.0);
  }

  TEST_CASE("rotation invariance and its control") {
    const Mixture m({{2, 1.0}, {3, 1.0}});
    const int N = 20;
    SpinSystem H(m, N, 8);
    const ConditioningSpec s = sample_band_point(0.7, 0.3, N, 9);
    const Eigen::MatrixXd O = random_orthogonal(N, 10);
    SdeConfig cfg;
    cfg.beta = 0.4;
    cfg.T = 1.0;
    CHECK(rotation_invariance_test(H, s, O, cfg, true).pass);
    const RotationReport bad = rotation_invariance_test(H, s, O, cfg, false);
    CHECK_FALSE(bad.pass);
    CHECK(bad.max_diff > 1e-3);
  }

  TEST_CASE("escape is reported") {
    const Mixture m({{2, 1.0}});
    SpinSystem H(m, 50, 1);
    const ConditioningSpec s = sample_band_point(0.0, 0.0, 50, 2);
    SdeConfig cfg;
    cfg.variant = SdeVariant::FConfined;
    cfg.ell = 0.01;
    cfg.r_guard = 1.05;
    cfg.T = 5.0;
    const Trajectory t = integrate(H, s, cfg);
    CHECK(t.escaped);
    CHECK(t.escape_time > 0.0);
    SolverConfig sc;
    sc.T = 5.0;
    sc.h = 0.05;
    const TwoTimeSolution S = solve_dynamics(InitCondition(m, InitSpec{}), sc);
    const McReport r = mc_compare(H, s, cfg, S, 3);
    CHECK(r.escaped == 3);
    CHECK(r.err_mean == 4.0);
  }

  TEST_CASE("confined variant stays near the sphere") {
    const Mixture m({{2, 1.0}});
    SpinSystem H(m, 200, 1);
    const ConditioningSpec s = sample_band_point(0.0, 0.0, 200, 2);
    SdeConfig cfg;
    cfg.variant = SdeVariant::FConfined;
    cfg.beta = 0.2;
    cfg.T = 1.0;
    cfg.substeps = 20;
    const Trajectory t = integrate(H, s, cfg);
    const ObservableSet o = observables(t, H, s);
    for (double k : o.K) REQUIRE(std::fabs(k - 1.0) < 0.1);
  }
}
