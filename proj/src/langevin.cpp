#include "spinglass/langevin.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <random>

#include "spinglass/error.hpp"

namespace sg {

Trajectory integrate(const Field& f, const ConditioningSpec& spec, const SdeConfig& cfg,
                     const Eigen::MatrixXd* noise_rotation) {
  const int N = spec.N;
  if (f.dim() != N) fail(Code::invalid, "field and conditioning geometry differ in dimension");
  if (cfg.substeps < 1) fail(Code::invalid, "substeps must be >= 1");
  if (!(cfg.r_guard > 1.0)) fail(Code::invalid, "r_guard must exceed 1");
  if (cfg.variant == SdeVariant::FConfined && !(cfg.ell > 0.0)) fail(Code::invalid, "ell must be positive");
  const int n = grid_steps(cfg.T, cfg.h_obs);
  const double dt = cfg.h_obs / cfg.substeps, sdt = std::sqrt(dt);
  // radial relaxation rate is about 4 ell; keep the Euler multiplier in (0, 1)
  if (cfg.variant == SdeVariant::FConfined && 4.0 * cfg.ell * dt >= 1.0)
    fail(Code::invalid, "ell * dt too large for the confined Euler step; raise substeps");

  Trajectory tr;
  tr.N = N;
  tr.n = n;
  tr.h_obs = cfg.h_obs;
  tr.seed = cfg.seed;
  tr.x.reserve(n + 1);
  tr.B.reserve(n + 1);

  std::seed_seq seq{std::uint32_t(cfg.seed), std::uint32_t(cfg.seed >> 32), 0x5de5u};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> nd;

  Eigen::VectorXd x = spec.x0, B = Eigen::VectorXd::Zero(N), g(N), xi(N), dB(N);
  tr.x.push_back(x);
  tr.B.push_back(B);
  const double lo = 0.5 * 0.5 * N, hi = cfg.r_guard * cfg.r_guard * N;
  const bool sph = cfg.variant == SdeVariant::SphericalProjected;

  for (int k = 1; k <= n; ++k) {
    for (int s = 0; s < cfg.substeps; ++s) {
      for (int i = 0; i < N; ++i) xi(i) = nd(rng);
      if (noise_rotation)
        dB.noalias() = sdt * (*noise_rotation * xi);
      else
        dB = sdt * xi;
      f.value_grad(x.data(), g.data());
      const double K = x.squaredNorm() / N;
      if (sph) {
        g -= (g.dot(x) / N) * x;
        Eigen::VectorXd pdB = dB - (dB.dot(x) / N) * x;
        x += (-cfg.beta * g - (0.5 * (N - 1) / N) * x) * dt + pdB;
        x *= std::sqrt(double(N)) / x.norm();
      } else {
        const double fp = 2.0 * cfg.ell * (K - 1.0) + cfg.f0_slope;
        x += (-fp * x - cfg.beta * g) * dt + dB;
      }
      B += dB;
      const double r2 = x.squaredNorm();
      if (!(r2 > lo && r2 < hi)) {
        tr.escaped = true;
        tr.escape_time = ((k - 1) * cfg.substeps + s + 1) * dt;
        return tr;
      }
    }
    tr.x.push_back(x);
    tr.B.push_back(B);
  }
  return tr;
}

ObservableSet observables(const Trajectory& tr, const Field& f, const ConditioningSpec& spec) {
  const int m = int(tr.x.size()) - 1;
  if (m < 0) fail(Code::invalid, "empty trajectory");
  const double N = tr.N;
  ObservableSet o;
  o.n = m;
  o.h = tr.h_obs;
  o.C.assign(TwoTimeSolution::idx(m + 1, 0), 0.0);
  o.chi.assign(o.C.size(), 0.0);
  o.q.assign(m + 1, 0.0);
  o.H.assign(m + 1, 0.0);
  o.K.assign(m + 1, 0.0);
  for (int i = 0; i <= m; ++i) {
    const Eigen::VectorXd& xi = tr.x[i];
    for (int j = 0; j <= i; ++j) {
      o.C[TwoTimeSolution::idx(i, j)] = xi.dot(tr.x[j]) / N;
      o.chi[TwoTimeSolution::idx(i, j)] = xi.dot(tr.B[j]) / N;
    }
    o.K[i] = xi.squaredNorm() / N;
    o.q[i] = spec.q_star > 0.0 ? xi.dot(spec.x_star) / N : 0.0;
    o.H[i] = -f.value(xi.data()) / N;
  }
  return o;
}

ErrorTerms error_functional(const ObservableSet& obs, const TwoTimeSolution& sol, double T) {
  const double ratio = obs.h / sol.h;
  const int stride = int(std::lround(ratio));
  if (stride < 1 || std::fabs(ratio - stride) > 1e-9 * ratio)
    fail(Code::grid_mismatch, "solution step must divide the observable step");
  const int m = int(std::floor(T / obs.h + 1e-9));
  if (m > obs.n || m * stride > sol.n) fail(Code::grid_mismatch, "grids do not cover [0,T]");

  ErrorTerms e;
  std::vector<double> chi_row(sol.n + 1);
  for (int i = 0; i <= m; ++i) {
    const int si = i * stride;
    chi_row[0] = 0.0;
    for (int k = 1; k <= si; ++k) chi_row[k] = chi_row[k - 1] + 0.5 * sol.h * (sol.r(si, k - 1) + sol.r(si, k));
    for (int j = 0; j <= i; ++j) {
      const std::size_t a = TwoTimeSolution::idx(i, j);
      e.C = std::max(e.C, std::fabs(obs.C[a] - sol.c(si, j * stride)));
      e.chi = std::max(e.chi, std::fabs(obs.chi[a] - chi_row[j * stride]));
    }
    e.q = std::max(e.q, std::fabs(obs.q[i] - sol.q[si]));
    e.H = std::max(e.H, std::fabs(obs.H[i] - sol.H[si]));
  }
  e.total = std::min(e.C, 1.0) + std::min(e.chi, 1.0) + std::min(e.q, 1.0) + std::min(e.H, 1.0);
  return e;
}

RotationReport rotation_invariance_test(const Field& f, const ConditioningSpec& spec, const Eigen::MatrixXd& O,
                                        const SdeConfig& cfg, bool rotate_noise, double tol) {
  const Eigen::VectorXd xs = spec.q_star > 0.0 ? Eigen::VectorXd(O * spec.x_star) : Eigen::VectorXd();
  ConditioningSpec rspec = make_spec(xs, O * spec.x0);
  RotatedField rf(f, O);
  Trajectory a = integrate(f, spec, cfg);
  Trajectory b = integrate(rf, rspec, cfg, rotate_noise ? &O : nullptr);
  if (a.escaped || b.escaped) return {INFINITY, false};
  ObservableSet oa = observables(a, f, spec), ob = observables(b, rf, rspec);
  double d = 0.0;
  auto cmp = [&d](const std::vector<double>& u, const std::vector<double>& v) {
    for (std::size_t i = 0; i < u.size(); ++i) d = std::max(d, std::fabs(u[i] - v[i]));
  };
  cmp(oa.C, ob.C);
  cmp(oa.chi, ob.chi);
  cmp(oa.q, ob.q);
  cmp(oa.H, ob.H);
  return {d, d <= tol};
}

Ensemble run_paths(const Field& f, const ConditioningSpec& spec, const SdeConfig& cfg, int paths) {
  if (paths < 1) fail(Code::invalid, "paths must be >= 1");
  Ensemble en;
  en.obs.resize(paths);
  en.escaped.assign(paths, 0);
  std::vector<std::exception_ptr> errs(paths);
#pragma omp parallel for schedule(dynamic)
  for (int k = 0; k < paths; ++k) try {
    SdeConfig c = cfg;
    std::seed_seq ss{std::uint32_t(cfg.seed), std::uint32_t(cfg.seed >> 32), std::uint32_t(k)};
    std::uint32_t out[2];
    ss.generate(out, out + 2);
    c.seed = (std::uint64_t(out[1]) << 32) | out[0];
    Trajectory tr = integrate(f, spec, c);
    en.escaped[k] = tr.escaped;
    if (!tr.escaped) en.obs[k] = observables(tr, f, spec);
  } catch (...) {
    errs[k] = std::current_exception();
  }
  for (auto& ep : errs)
    if (ep) std::rethrow_exception(ep);

  int used = 0;
  for (int k = 0; k < paths; ++k) {
    if (en.escaped[k]) {
      ++en.escaped_count;
      continue;
    }
    const ObservableSet& o = en.obs[k];
    if (used++ == 0) {
      en.mean = o;
      continue;
    }
    for (std::size_t i = 0; i < o.C.size(); ++i) {
      en.mean.C[i] += o.C[i];
      en.mean.chi[i] += o.chi[i];
    }
    for (std::size_t i = 0; i < o.q.size(); ++i) {
      en.mean.q[i] += o.q[i];
      en.mean.H[i] += o.H[i];
      en.mean.K[i] += o.K[i];
    }
  }
  if (used > 1) {
    for (auto* v : {&en.mean.C, &en.mean.chi, &en.mean.q, &en.mean.H, &en.mean.K})
      for (double& x : *v) x /= used;
  }
  return en;
}

McReport report(const Ensemble& en, const TwoTimeSolution& sol, double T) {
  const int paths = int(en.obs.size());
  McReport rep;
  rep.errors.assign(paths, 4.0);
  rep.terms.assign(paths, ErrorTerms{1, 1, 1, 1, 4});
  rep.escaped = en.escaped_count;
  for (int k = 0; k < paths; ++k) {
    if (en.escaped[k]) continue;
    rep.terms[k] = error_functional(en.obs[k], sol, T);
    rep.errors[k] = rep.terms[k].total;
  }
  double s = 0.0, s2 = 0.0;
  for (double e : rep.errors) s += e;
  rep.err_mean = s / paths;
  for (double e : rep.errors) s2 += (e - rep.err_mean) * (e - rep.err_mean);
  rep.err_se = paths > 1 ? std::sqrt(s2 / (paths - 1) / paths) : 0.0;
  return rep;
}

McReport mc_compare(const Field& f, const ConditioningSpec& spec, const SdeConfig& cfg, const TwoTimeSolution& sol,
                    int paths) {
  return report(run_paths(f, spec, cfg, paths), sol, cfg.T);
}

}  // namespace sg
