#include "spinglass/phase.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "spinglass/error.hpp"

namespace sg {

namespace {

using Fn = std::function<double(double)>;

// x/2 + log(1-x)/2 without cancellation near 0
double half_x_plus_log(double x) {
  if (std::fabs(x) < 0.05) {
    double s = 0.0, xk = x * x;
    for (int k = 2; k < 40; ++k) {
      s += xk / k;
      xk *= x;
    }
    return -0.5 * s;
  }
  return 0.5 * (x + std::log1p(-x));
}

double g0(const Mixture& m, double beta, double x) {
  return 2.0 * beta * beta * m.nu(x) + half_x_plus_log(x);
}

double g1(const Mixture& m, double beta, double x) {
  return 2.0 * beta * beta * m.nu(x, 1) - 0.5 * x / (1.0 - x);
}

double golden_max(const Fn& f, double a, double b, double& fx) {
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  double x = fc > fd ? c : d;
  fx = std::max(fc, fd);
  return x;
}

struct Sup {
  double x;
  double value;
};

// sup of f over (0, 1 - margin] by grid scan, with golden polish of each local maximum
Sup scan_sup(const Fn& f, const ScanOptions& opt) {
  const int n = opt.grid_points;
  const double xmax = 1.0 - opt.x_margin;
  const double dx = xmax / n;
  std::vector<double> v(n + 1);
  for (int k = 0; k <= n; ++k) v[k] = f(k * dx);
  Sup best{0.0, v[0]};
  for (int k = 1; k <= n; ++k) {
    if (v[k] > best.value) best = {k * dx, v[k]};
    bool peak = v[k] >= v[k - 1] && (k == n || v[k] >= v[k + 1]);
    if (peak && k < n) {
      double fx;
      double x = golden_max(f, (k - 1) * dx, (k + 1) * dx, fx);
      if (fx > best.value) best = {x, fx};
    }
  }
  return best;
}

// largest x in [0, 1 - margin] with f(x) >= thr; f(0) = 0
double sup_level(const Fn& f, double thr, const ScanOptions& opt, bool& found) {
  const int n = opt.grid_points;
  const double xmax = 1.0 - opt.x_margin;
  const double dx = xmax / n;
  const double slack = 1e-13 * (1.0 + std::fabs(thr));
  auto ok = [&](double x) { return f(x) >= thr - slack; };
  found = true;
  int k = n;
  while (k > 0 && !ok(k * dx)) --k;
  double lo, hi;
  bool strict = false;
  if (k > 0) {
    if (k == n) return xmax;
    lo = k * dx;
    hi = (k + 1) * dx;
  } else {
    Sup s = scan_sup(f, opt);
    if (s.value >= thr - slack && s.x > 0.0) {
      lo = s.x;
      hi = std::min(xmax, s.x + dx);
    } else if (ok(0.0)) {
      lo = 0.0;
      hi = dx;
      strict = true;
    } else {
      found = false;
      return 0.0;
    }
  }
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    double mid = 0.5 * (lo + hi);
    if (strict ? f(mid) >= thr : ok(mid))
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double bisect_beta(const std::function<bool(double)>& pred) {
  double lo = 0.0, hi = 1.0;
  while (!pred(hi)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e8) fail(Code::internal, "critical beta search did not bracket");
  }
  while (hi - lo > 1e-13 * hi) {
    double mid = 0.5 * (lo + hi);
    if (pred(mid))
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

// g''_beta(0) = 2 beta^2 nu''(0) - 1/2
bool curvature_positive(const Mixture& m, double beta) {
  return 2.0 * beta * beta * m.nu(0.0, 2) - 0.5 > 0.0;
}

}  // namespace

double beta_c_stat(const Mixture& m, const ScanOptions& opt) {
  return bisect_beta([&](double b) {
    if (curvature_positive(m, b)) return true;
    return scan_sup([&](double x) { return g0(m, b, x); }, opt).value > 0.0;
  });
}

double beta_c_dyn(const Mixture& m, const ScanOptions& opt) {
  return bisect_beta([&](double b) {
    if (curvature_positive(m, b)) return true;
    return scan_sup([&](double x) { return g1(m, b, x); }, opt).value > 0.0;
  });
}

double q_d(const Mixture& m, double beta, const ScanOptions& opt) {
  bool found;
  return sup_level([&](double x) { return g1(m, beta, x); }, 0.0, opt, found);
}

double c_inf(const Mixture& m, double beta, double gamma, const ScanOptions& opt) {
  bool found;
  double x = sup_level([&](double x) { return g1(m, beta, x); }, 0.5 - gamma, opt, found);
  if (!found) fail(Code::gamma_too_small, "gamma-too-small: g'_beta stays below 1/2 - gamma");
  return x;
}

BandRelaxation band_relaxation_predicate(const Mixture& m, double beta, double q_beta) {
  if (!(q_beta >= 0.0 && q_beta < 1.0)) fail(Code::domain, "q_beta must lie in [0,1)");
  BandRelaxation r{};
  r.gamma_beta = 0.5 / (1.0 - q_beta) - 2.0 * beta * beta * m.nu(q_beta, 1);
  r.c_inf = c_inf(m, beta, r.gamma_beta);
  r.fast = std::fabs(r.c_inf - q_beta) < 1e-6;
  r.beta_c_dyn_effective = beta_c_dyn(m.effective(q_beta));
  r.fast_predicted = beta < r.beta_c_dyn_effective;
  return r;
}

PhasePoint phase_point(const Mixture& m, double beta, double bcd, double bcs) {
  PhasePoint p{};
  p.beta = beta;
  p.beta_c_dyn = bcd;
  p.beta_c_stat = bcs;
  p.q_d = q_d(m, beta);
  p.regime = beta <= bcs ? Regime::RS : Regime::RSB;
  return p;
}

}  // namespace sg
