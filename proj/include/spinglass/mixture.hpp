#pragma once

#include <limits>
#include <map>
#include <vector>

namespace sg {

// nu(r) = sum_p b_p^2 r^p over finitely many p >= 2.
class Mixture {
 public:
  Mixture() = default;
  explicit Mixture(const std::map<int, double>& coeffs,
                   double radius_bound = std::numeric_limits<double>::infinity());

  // order 0..3 gives nu, nu', nu'', nu'''
  double nu(double r, int order = 0) const;
  double psi(double r) const;                // nu'(r) + r nu''(r)
  double psi_prime(double r) const;          // 2 nu''(r) + r nu'''(r)
  double theta(double x) const;              // nu(1) - nu(x) - nu'(x)(1-x)
  double g_beta(double beta, double x, int order = 0) const;
  double phi_gamma(double beta, double gamma, double x) const;

  Mixture effective(double q) const;
  Mixture truncate(int m_max) const;
  Mixture scaled(double c) const;

  const std::map<int, double>& coeffs() const { return coeffs_; }
  int max_degree() const { return coeffs_.empty() ? 0 : coeffs_.rbegin()->first; }
  double radius_bound() const { return rbar_; }
  // Single nonzero coefficient; returns p, else 0.
  int pure_degree() const;
  bool even() const;

 private:
  void check(double r) const;

  std::map<int, double> coeffs_;
  double rbar_ = std::numeric_limits<double>::infinity();
  // dense ascending coefficient table a_k = b_k^2 for k = 0..max_degree
  std::vector<double> a_;
};

}  // namespace sg
