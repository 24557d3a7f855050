#include "spinglass/mixture.hpp"

#include <cmath>
#include <string>

#include "spinglass/error.hpp"

namespace sg {

Mixture::Mixture(const std::map<int, double>& coeffs, double radius_bound) : rbar_(radius_bound) {
  bool any = false;
  for (auto [p, b2] : coeffs) {
    if (p < 2) fail(Code::invalid, "mixture degree must be >= 2, got " + std::to_string(p));
    if (!(b2 >= 0.0) || !std::isfinite(b2)) fail(Code::invalid, "mixture coefficient must be finite and >= 0");
    if (b2 > 0.0) {
      coeffs_[p] = b2;
      any = true;
    }
  }
  if (!any) fail(Code::invalid, "mixture has no positive coefficient");
  if (!(radius_bound > 0.0)) fail(Code::invalid, "radius bound must be positive");
  a_.assign(max_degree() + 1, 0.0);
  for (auto [p, b2] : coeffs_) a_[p] = b2;
}

void Mixture::check(double r) const {
  if (a_.empty()) fail(Code::invalid, "empty mixture");
  if (std::isfinite(rbar_) && std::fabs(r) > rbar_ * rbar_)
    fail(Code::domain, "argument outside the mixture radius");
}

double Mixture::nu(double r, int order) const {
  check(r);
  if (order < 0 || order > 3) fail(Code::invalid, "derivative order must be 0..3");
  const int d = max_degree();
  // Horner on the order-th derivative: sum_k a_k k!/(k-order)! r^(k-order)
  double acc = 0.0;
  for (int k = d; k >= order; --k) {
    double c = a_[k];
    for (int m = 0; m < order; ++m) c *= double(k - m);
    acc = acc * r + c;
  }
  return acc;
}

double Mixture::psi(double r) const { return nu(r, 1) + r * nu(r, 2); }

double Mixture::psi_prime(double r) const { return 2.0 * nu(r, 2) + r * nu(r, 3); }

double Mixture::theta(double x) const {
  if (std::fabs(x) > 1.0) fail(Code::domain, "theta needs |x| <= 1");
  return nu(1.0) - nu(x) - nu(x, 1) * (1.0 - x);
}

double Mixture::g_beta(double beta, double x, int order) const {
  if (!(x < 1.0)) fail(Code::domain, "g_beta needs x < 1");
  const double b2 = 2.0 * beta * beta;
  if (order == 0) return b2 * nu(x) + 0.5 * x + 0.5 * std::log1p(-x);
  if (order == 1) return b2 * nu(x, 1) + 0.5 - 0.5 / (1.0 - x);
  if (order == 2) return b2 * nu(x, 2) - 0.5 / ((1.0 - x) * (1.0 - x));
  fail(Code::invalid, "g_beta order must be 0, 1 or 2");
}

double Mixture::phi_gamma(double beta, double gamma, double x) const {
  return gamma + 2.0 * beta * beta * nu(x, 1);
}

Mixture Mixture::effective(double q) const {
  if (!(q < 1.0)) fail(Code::domain, "effective mixture needs q < 1");
  std::map<int, double> c;
  const double s = 1.0 - q;
  for (auto [p, b2] : coeffs_) {
    // binomial expansion of (q + s x)^p, constant and linear terms dropped
    double binom = 1.0;
    for (int k = 0; k <= p; ++k) {
      if (k >= 2) c[k] += b2 * binom * std::pow(q, p - k) * std::pow(s, k);
      binom = binom * double(p - k) / double(k + 1);
    }
  }
  return Mixture(c, rbar_);
}

Mixture Mixture::truncate(int m_max) const {
  std::map<int, double> c;
  for (auto [p, b2] : coeffs_)
    if (p <= m_max) c[p] = b2;
  if (c.empty()) fail(Code::invalid, "truncation leaves an empty mixture");
  return Mixture(c, rbar_);
}

Mixture Mixture::scaled(double f) const {
  std::map<int, double> c;
  for (auto [p, b2] : coeffs_) c[p] = f * b2;
  return Mixture(c, rbar_);
}

int Mixture::pure_degree() const { return coeffs_.size() == 1 ? coeffs_.begin()->first : 0; }

bool Mixture::even() const {
  for (auto [p, b2] : coeffs_)
    if (p % 2) return false;
  return true;
}

}  // namespace sg
