#include "spinglass/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <filesystem>
#include <random>

#include "spinglass/config.hpp"
#include "spinglass/error.hpp"
#include "spinglass/fdt.hpp"
#include "spinglass/hamiltonian.hpp"
#include "spinglass/langevin.hpp"
#include "spinglass/phase.hpp"

namespace sg {

namespace {

std::string say(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

using Clock = std::chrono::steady_clock;
double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

inline std::size_t I(int i, int j) { return TwoTimeSolution::idx(i, j); }

Mixture two_three() { return Mixture({{2, 1.0}, {3, 1.0}}); }

InitSpec generic_spec() {
  InitSpec s;
  s.q_star = 0.8;
  s.q_o = 0.5;
  s.E = 0.3;
  s.E_star = 0.2;
  s.G_star = 0.9;
  return s;
}

struct Out {
  bool pass;
  std::string detail;
};

Out c1() {
  const auto t0 = Clock::now();
  InitCondition ic(two_three(), generic_spec());
  SolverConfig c;
  c.beta = 0.0;
  c.T = 2.0;
  c.h = 0.01;
  const TwoTimeSolution S = solve_dynamics(ic, c);
  double e = 0.0;
  for (int i = 0; i <= S.n; ++i) {
    for (int j = 0; j <= i; ++j) {
      const double ex = std::exp(-0.5 * (i - j) * c.h);
      e = std::max({e, std::fabs(S.C[I(i, j)] - ex), std::fabs(S.R[I(i, j)] - ex)});
    }
    e = std::max({e, std::fabs(S.mu[i] - 0.5), std::fabs(S.q[i] - 0.5 * std::exp(-0.5 * i * c.h))});
  }
  const double t = since(t0);
  return {e < 5 * c.h && t < 10.0, say("sup err %.3g < %.3g, %.2fs < 10s", e, 5 * c.h, t)};
}

Out c2() {
  const auto t0 = Clock::now();
  const double h = 0.01;
  const FdtSolution f = solve_fdt(two_three(), 0.0, 0.5, 20.0, h);
  double e = 0.0;
  for (std::size_t k = 0; k < f.c.size(); ++k) e = std::max(e, std::fabs(f.c[k] - std::exp(-0.5 * k * h)));
  const double t = since(t0);
  return {e < 3 * h * h && t < 1.0, say("sup err %.3g < %.3g, %.3fs < 1s", e, 3 * h * h, t)};
}

Out c3() {
  const Mixture m = two_three();
  const double beta = 0.6 * beta_c_dyn(m);
  InitCondition ic(m, InitSpec{});
  SolverConfig c;
  c.beta = beta;
  c.T = 8.0;
  c.h = 0.01;
  const TwoTimeSolution a = solve_dynamics(ic, c);
  c.drop_v = true;
  const TwoTimeSolution b = solve_dynamics(ic, c);
  const bool same = a.C == b.C && a.R == b.R && a.H == b.H && a.mu == b.mu && a.q == b.q;
  const FdtSolution f = solve_fdt(m, beta, 0.5, 2.0, c.h);
  const int t = a.n - 200;
  double e = 0.0;
  for (int k = 0; k <= 200; ++k) e = std::max(e, std::fabs(a.c(t + k, t) - f.c[k]));
  return {same && e < 0.02, say("bitwise equal %s, beta %.4f, sup_tau |C(6+tau,6) - c_1/2| %.3g < 0.02",
                                same ? "yes" : "no", beta, e)};
}

Out c4() {
  const auto t0 = Clock::now();
  const Mixture m = two_three();
  const double q_ea = 0.3, beta = 0.2, gs = 0.4;
  const InitCondition ic = gibbs_init(m, beta, q_ea, gs);
  const double bce = beta_c_dyn(m.effective(q_ea));
  const Stationarity st = check_stationary(ic, beta);
  SolverConfig c;
  c.beta = beta;
  c.T = 8.0;
  c.h = 0.01;
  const TwoTimeSolution S = solve_dynamics(ic, c);
  const double g = gamma_star(m, beta, ic.spec().q_star, ic.alpha());
  const FdtSolution f = solve_fdt(m, beta, g, c.T, c.h);
  double eC = 0.0, eq = 0.0, eH = 0.0;
  for (int i = 0; i <= S.n; ++i) {
    for (int j = 0; j <= i; ++j) eC = std::max(eC, std::fabs(S.C[I(i, j)] - f.c[i - j]));
    eq = std::max(eq, std::fabs(S.q[i] - ic.spec().q_o));
    eH = std::max(eH, std::fabs(S.H[i] - ic.spec().E));
  }
  const double t = since(t0), tol = 10 * c.h;
  const bool ok = beta < bce && st.admissible && eC < tol && eq < tol && eH < tol && t < 120.0;
  return {ok, say("beta %.2f < %.4f, admissible %s; C %.2g, q %.2g, H %.2g < %.2g; n=%d in %.1fs", beta, bce,
                  st.admissible ? "yes" : "no", eC, eq, eH, tol, S.n, t)};
}

Out c5() {
  const Mixture m = two_three();
  const double beta0 = 0.2, beta = 0.3;
  const InitCondition ic = gibbs_init(m, beta0, 0.3, 0.4);
  const Stationarity st = check_stationary(ic, beta);
  SolverConfig c;
  c.beta = beta;
  c.T = 4.0;
  c.h = 0.01;
  const TwoTimeSolution S = solve_dynamics(ic, c);
  double d = 0.0;
  for (int i = 1; i < S.n; ++i) d = std::max(d, std::fabs(S.H[i + 1] - S.H[i - 1]) / (2 * c.h));
  const bool ok = !st.admissible && st.residual > 1e-4 && d > 1e-3;
  return {ok, say("beta0 %.2f, beta %.2f: residual %.3g > 1e-4, sup|H'| %.3g > 1e-3", beta0, beta, st.residual, d)};
}

Out c6(const AcceptanceOptions& opt) {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  if (fs::is_directory(opt.config_dir))
    for (const auto& e : fs::directory_iterator(opt.config_dir)) {
      const std::string name = e.path().filename().string();
      if (name.rfind("solve_", 0) == 0 && e.path().extension() == ".json") files.push_back(e.path());
    }
  std::sort(files.begin(), files.end());
  if (files.empty()) return {false, "no solve_*.json examples in " + opt.config_dir};
  bool ok = true;
  double worst = INFINITY;
  for (const auto& p : files) {
    const SolveConfig cfg = parse_solve(read_file(p.string()));
    const InitCondition ic = cfg.init.build(cfg.mixture);
    const TwoTimeSolution S = solve_dynamics(ic, cfg.solver);
    const PsdReport r = psd_check(S, ic, 30, 1e-6);
    ok = ok && r.ok;
    worst = std::min({worst, r.min_eig_C, r.min_eig_Cbar});
  }
  return {ok, say("%zu examples, smallest eigenvalue %.3g >= -1e-6", files.size(), worst)};
}

Out c7() {
  const auto t0 = Clock::now();
  const InitCondition ic(two_three(), generic_spec());
  const auto rows = ell_limit_check(ic, 0.3, 2.0, 0.01, {10.0, 40.0, 160.0});
  bool dec = true;
  double cmin = INFINITY, cmax = 0.0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const double c = rows[k].ell * rows[k].sup_K_minus_1;
    cmin = std::min(cmin, c);
    cmax = std::max(cmax, c);
    if (k > 0)
      dec = dec && rows[k].sup_K_minus_1 < rows[k - 1].sup_K_minus_1 &&
            rows[k].dist_to_spherical < rows[k - 1].dist_to_spherical;
  }
  const double t = since(t0);
  const bool ok = dec && cmax <= 2.0 * cmin && t < 300.0;
  return {ok, say("sup|K-1| %.3g, %.3g, %.3g; ell*sup|K-1| in [%.3g, %.3g]; dist %.3g, %.3g, %.3g; %.1fs",
                  rows[0].sup_K_minus_1, rows[1].sup_K_minus_1, rows[2].sup_K_minus_1, cmin, cmax,
                  rows[0].dist_to_spherical, rows[1].dist_to_spherical, rows[2].dist_to_spherical, t)};
}

// E[H(x) | H(x0), H(x_star), grad H(x_star)] from the joint covariance, pseudo-inverse for the
// pure-p rank deficiency.
Out c8() {
  const Mixture m({{2, 1.0}});
  const int N = 8;
  SpinSystem sys(m, N, 7);
  const ConditioningSpec spec = sample_band_point(0.7, 0.3, N, 11);
  const Observed o = observe(sys, spec);
  const ConditionalMean cm(spec, m, o.vhat, o.u);
  const int D = N + 2;
  const Eigen::VectorXd& xs = spec.x_star;
  const Eigen::VectorXd* pts[2] = {&spec.x0, &xs};
  Eigen::MatrixXd K(D, D);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) K(a, b) = N * m.nu(pts[a]->dot(*pts[b]) / N);
  const double qq = xs.squaredNorm() / N;
  for (int a = 0; a < 2; ++a) {
    const double r = pts[a]->dot(xs) / N;
    for (int j = 0; j < N; ++j) K(a, 2 + j) = K(2 + j, a) = m.nu(r, 1) * (*pts[a])(j);
  }
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) K(2 + i, 2 + j) = m.nu(qq, 1) * (i == j) + m.nu(qq, 2) * xs(i) * xs(j) / N;
  Eigen::VectorXd d(D), g(N);
  d(0) = sys.value(spec.x0.data());
  d(1) = sys.value_grad(xs.data(), g.data());
  d.tail(N) = g;
  const Eigen::VectorXd Kd = Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd>(K).solve(d);

  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  double e_val = 0, e_grad = 0, e_hess = 0, e_cf = 0;
  const double eps = 1e-4;
  for (int t = 0; t < 20; ++t) {
    Eigen::VectorXd x(N);
    for (int i = 0; i < N; ++i) x(i) = nd(rng);
    x *= std::sqrt(double(N)) / x.norm() * (0.5 + 0.05 * t);
    Eigen::VectorXd k(D);
    for (int a = 0; a < 2; ++a) k(a) = N * m.nu(x.dot(*pts[a]) / N);
    const double r = x.dot(xs) / N;
    for (int j = 0; j < N; ++j) k(2 + j) = m.nu(r, 1) * x(j);
    const double bf = k.dot(Kd);
    e_val = std::max(e_val, std::fabs(bf - cm.value(x)) / (1.0 + std::fabs(bf)));
    const Eigen::VectorXd gr = cm.gradient(x);
    const Eigen::MatrixXd H = cm.hessian(x);
    for (int i = 0; i < N; ++i) {
      Eigen::VectorXd xp = x, xm = x;
      xp(i) += eps;
      xm(i) -= eps;
      const double fd = (cm.value(xp) - cm.value(xm)) / (2 * eps);
      e_grad = std::max(e_grad, std::fabs(fd - gr(i)) / (1.0 + std::fabs(gr(i))));
      const Eigen::VectorXd gd = (cm.gradient(xp) - cm.gradient(xm)) / (2 * eps);
      e_hess = std::max(e_hess, (gd - H.col(i)).cwiseAbs().maxCoeff() / (1.0 + H.col(i).cwiseAbs().maxCoeff()));
    }
    e_cf = std::max(e_cf, (cm.hessian_closed_form(x) - H).cwiseAbs().maxCoeff());
  }
  const bool ok = e_val < 1e-8 && e_grad < 1e-5 && e_hess < 1e-5 && e_cf < 1e-8;
  return {ok, say("Schur %.2g < 1e-8; FD grad %.2g, FD Hess %.2g < 1e-5; closed-form Hess %.2g < 1e-8", e_val, e_grad,
                  e_hess, e_cf)};
}

Out c9() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ub(0.1, 1.0);
  std::uniform_int_distribution<int> up(2, 8), nk(2, 4);
  double worst = INFINITY;
  int cells = 0;
  for (int t = 0; t < 10; ++t) {
    std::map<int, double> c;
    const int k = nk(rng);
    while (int(c.size()) < k) c[up(rng)] = ub(rng);
    const Mixture m(c);
    for (double qs : {0.3, 0.7, 1.0})
      for (int a = -19; a <= 19; ++a) {
        const double qo = 0.05 * a;
        if (std::fabs(qo) >= qs - 1e-12) continue;  // |q_o| = q_star is the degenerate set
        const Eigen::Matrix4d S = sigma_nu(m, qs, qo);
        worst = std::min(worst, Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d>(S).eigenvalues().minCoeff());
        ++cells;
      }
  }
  return {worst > 0.0, say("%d grid cells over 10 mixtures, min eigenvalue %.3g > 0", cells, worst)};
}

Out c10() {
  const auto t0 = Clock::now();
  const Mixture m({{2, 1.0}, {3, 0.1}});
  const double beta = 0.3, beta0 = 0.2;
  const InitCondition ic = gibbs_init(m, beta0, 0.0, 0.0);
  SdeConfig sde;
  sde.beta = beta;
  sde.T = 2.0;
  sde.h_obs = 0.05;
  sde.substeps = 5;
  SolverConfig sc;
  sc.beta = beta;
  sc.T = sde.T;
  sc.h = sde.h_obs / sde.substeps;
  const TwoTimeSolution sol = solve_dynamics(ic, sc);
  std::vector<double> err;
  std::string rows;
  for (int N : {100, 200, 400}) {
    SpinSystem sys(m, N, 1000 + N);
    const ConditioningSpec spec = sample_band_point(0.0, 0.0, N, 2000 + N);
    ConditionedField cf(sys, spec, ic);
    sde.seed = 3000 + N;
    const McReport r = mc_compare(cf, spec, sde, sol, 8);
    err.push_back(r.err_mean);
    rows += say("N=%d %.3f+-%.3f (esc %d); ", N, r.err_mean, r.err_se, r.escaped);
  }
  const bool mono = err[1] < err[0] && err[2] < err[1];
  const double t = since(t0);
  return {mono && err[2] < 0.15 && t < 900.0,
          rows + say("monotone %s, final %.3f < 0.15, %.0fs", mono ? "yes" : "no", err[2], t)};
}

Out c11() {
  const Mixture m({{2, 1.0}});
  const int N = 50;
  InitSpec s;
  s.q_star = 0.7;
  s.q_o = 0.3;
  s.E = 0.4;
  s.E_star = 0.5;
  s.G_star = 2.0;
  const InitCondition ic(m, s);
  SpinSystem sys(m, N, 17);
  const ConditioningSpec spec = sample_band_point(s.q_star, s.q_o, N, 19);
  ConditionedField cf(sys, spec, ic);
  const Eigen::MatrixXd O = random_orthogonal(N, 23);
  SdeConfig c;
  c.beta = 0.3;
  c.T = 1.0;
  c.h_obs = 0.05;
  c.seed = 29;
  const RotationReport r = rotation_invariance_test(cf, spec, O, c, true, 1e-9);
  const RotationReport neg = rotation_invariance_test(cf, spec, O, c, false, 1e-9);
  const RotationReport id = rotation_invariance_test(cf, spec, Eigen::MatrixXd::Identity(N, N), c, true, 0.0);
  return {r.pass && !neg.pass && id.pass,
          say("max diff %.2g <= 1e-9; identity %.2g; unrotated-noise control %.2g (must fail)", r.max_diff,
              id.max_diff, neg.max_diff)};
}

Out c12() {
  const Mixture m({{2, 1.0}, {4, 0.5}});
  InitSpec s = generic_spec();
  const InitCondition a(m, s);
  s.q_o = -s.q_o;
  const InitCondition b(m, s);
  SolverConfig c;
  c.beta = 0.4;
  c.T = 2.0;
  c.h = 0.01;
  const TwoTimeSolution A = solve_dynamics(a, c), B = solve_dynamics(b, c);
  double d = 0.0;
  for (std::size_t i = 0; i < A.C.size(); ++i) d = std::max({d, std::fabs(A.C[i] - B.C[i]), std::fabs(A.R[i] - B.R[i])});
  for (int i = 0; i <= A.n; ++i) d = std::max({d, std::fabs(A.q[i] + B.q[i]), std::fabs(A.H[i] - B.H[i])});
  return {d <= 1e-10, say("max |dC|,|dR|,|q+q'|,|dH| = %.3g <= 1e-10", d)};
}

Out c13() {
  const InitCondition ic(two_three(), generic_spec());
  SolverConfig c;
  c.beta = 0.4;
  c.T = 2.0;
  c.h = 0.04;
  const TwoTimeSolution a = solve_dynamics(ic, c);
  c.h = 0.02;
  const TwoTimeSolution b = solve_dynamics(ic, c);
  c.h = 0.01;
  const TwoTimeSolution f = solve_dynamics(ic, c);
  const Distance d1 = sup_distance(a, b), d2 = sup_distance(b, f);
  const double rC = d1.C / d2.C, rR = d1.R / d2.R, rq = d1.q / d2.q, rH = d1.H / d2.H;
  const bool ok = std::min({rC, rR, rq, rH}) >= 1.8;
  return {ok, say("ratios C %.2f, R %.2f, q %.2f, H %.2f >= 1.8 (h = 0.04, 0.02, 0.01)", rC, rR, rq, rH)};
}

const char* kNames[kCriteria] = {
    "beta=0 closed form",        "FDT linear oracle",         "classical reduction",     "stationarity",
    "non-stationarity",          "PSD invariants",            "ell limit",               "Gaussian conditioning",
    "Sigma positive definite",   "finite-N convergence",      "rotation invariance",     "even symmetry",
    "grid convergence"};

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt) {
  if (id < 1 || id > kCriteria) fail(Code::invalid, "criterion id out of range");
  CriterionResult r;
  r.id = id;
  r.name = kNames[id - 1];
  const auto t0 = Clock::now();
  try {
    Out o;
    switch (id) {
      case 1: o = c1(); break;
      case 2: o = c2(); break;
      case 3: o = c3(); break;
      case 4: o = c4(); break;
      case 5: o = c5(); break;
      case 6: o = c6(opt); break;
      case 7: o = c7(); break;
      case 8: o = c8(); break;
      case 9: o = c9(); break;
      case 10: o = c10(); break;
      case 11: o = c11(); break;
      case 12: o = c12(); break;
      default: o = c13(); break;
    }
    r.pass = o.pass;
    r.detail = o.detail;
  } catch (const std::exception& e) {
    r.pass = false;
    r.detail = std::string("error: ") + e.what();
  }
  r.seconds = since(t0);
  return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt) {
  std::vector<CriterionResult> out;
  for (int id = 1; id <= kCriteria; ++id) out.push_back(run_criterion(id, opt));
  return out;
}

}  // namespace sg
