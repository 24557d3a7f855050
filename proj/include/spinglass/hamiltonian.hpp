#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <vector>

#include "spinglass/init_params.hpp"

namespace sg {

// Scalar field on R^N with gradient.
class Field {
 public:
  virtual ~Field() = default;
  virtual int dim() const = 0;
  virtual double value(const double* x) const = 0;
  // returns the value and writes the gradient
  virtual double value_grad(const double* x, double* g) const = 0;
};

// H_J(x) = sum_p b_p sum_{i_1..i_p} J x^{i_1}...x^{i_p}. Couplings are drawn for every
// ordered tuple and accumulated per multiset {i_1 <= ... <= i_p}, which gives the same function.
class SpinSystem : public Field {
 public:
  SpinSystem(const Mixture& m, int N, std::uint64_t seed, double r_guard = 2.0);

  int dim() const override { return N_; }
  double value(const double* x) const override;
  double value_grad(const double* x, double* g) const override;

  const Mixture& mixture() const { return m_; }
  std::uint64_t seed() const { return seed_; }
  double r_guard() const { return r_guard_; }

 private:
  struct Block {
    int p;
    double b;
    std::vector<double> coef;  // colex order over multisets
  };
  void guard(const double* x) const;

  Mixture m_;
  int N_;
  std::uint64_t seed_;
  double r_guard_;
  std::vector<Block> blocks_;
};

// x_star on q_star S_N, x0 on the band of overlap q_o, with the basis (xhat, zhat).
struct ConditioningSpec {
  int N = 0;
  double q_star = 0.0;
  double q_o = 0.0;
  double alpha = 0.0;
  Eigen::VectorXd x_star, x0, xhat, zhat;
};

ConditioningSpec make_spec(const Eigen::VectorXd& x_star, const Eigen::VectorXd& x0);
// x_star = q_star sqrt(N) e_1 and x0 = alpha sqrt(N) xhat + sqrt(1-alpha^2) sqrt(N) g, g uniform
// on the unit sphere orthogonal to xhat. q_star = 0 gives x0 uniform on S_N and x_star = 0.
ConditioningSpec sample_band_point(double q_star, double q_o, int N, std::uint64_t seed);

// E[H(x) | Hhat = vhat, H_perp = u], u given as an N-vector orthogonal to xhat and zhat.
class ConditionalMean {
 public:
  ConditionalMean(const ConditioningSpec& spec, const Mixture& m, const Eigen::Vector4d& vhat,
                  const Eigen::VectorXd& u);

  double value(const Eigen::VectorXd& x) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& x) const;
  // direct differentiation in the standard basis
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;
  // block form in the (xhat, zhat, rest) basis, mapped back to the standard basis
  Eigen::MatrixXd hessian_closed_form(const Eigen::VectorXd& x) const;

  const std::array<double, 4>& w() const { return w_; }

 private:
  const ConditioningSpec& s_;
  Mixture m_;
  std::array<double, 4> w_{};
  Eigen::VectorXd u_;
  double gamma_ = 1.0;  // nu'(q_star^2)
  bool rs_;
};

// Observed data of a field at the conditioning points.
struct Observed {
  Eigen::Vector4d vhat;
  Eigen::VectorXd u;
};
Observed observe(const Field& f, const ConditioningSpec& spec);

// H^c = H - Hbar(observed) + Hbar(target), target = (E, E_star, G_star, 0) with u = 0.
class ConditionedField : public Field {
 public:
  ConditionedField(const Field& base, const ConditioningSpec& spec, const InitCondition& ic);

  int dim() const override { return base_.dim(); }
  double value(const double* x) const override;
  double value_grad(const double* x, double* g) const override;

 private:
  const Field& base_;
  const ConditioningSpec& spec_;
  ConditionalMean obs_, tgt_;
};

// phi(O^T x)
class RotatedField : public Field {
 public:
  RotatedField(const Field& base, const Eigen::MatrixXd& O) : base_(base), O_(O) {}
  int dim() const override { return base_.dim(); }
  double value(const double* x) const override;
  double value_grad(const double* x, double* g) const override;

 private:
  const Field& base_;
  Eigen::MatrixXd O_;
};

// Product of N Householder reflections with random directions.
Eigen::MatrixXd random_orthogonal(int N, std::uint64_t seed);

}  // namespace sg
