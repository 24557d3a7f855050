#pragma once

#include <optional>
#include <vector>

#include "spinglass/init_params.hpp"

namespace sg {

// Packed lower triangle (i >= j) plus one-time arrays on the grid s_i = i h.
struct TwoTimeSolution {
  double h = 0.0;
  int n = 0;
  std::vector<double> C, R;
  std::vector<double> q, K, mu, L, H;

  static std::size_t idx(int i, int j) { return std::size_t(i) * (i + 1) / 2 + j; }
  void resize(int n_, double h_);
  double c(int i, int j) const { return i >= j ? C[idx(i, j)] : C[idx(j, i)]; }
  double r(int i, int j) const { return i >= j ? R[idx(i, j)] : 0.0; }
  // chi(s_i, t_j) = int_0^{t_j} R(s_i, u) du, trapezoid
  double chi(int i, int j) const;
};

enum class Variant { Spherical, FDynamics, GradientFlow };

struct SolverConfig {
  double beta = 0.0;
  double T = 1.0;
  double h = 0.01;
  Variant variant = Variant::Spherical;
  double ell = 0.0;
  std::optional<double> f0_slope;  // default from the K'(0) = 0 condition
  int corrector_iters = 2;
  double mu_tol = 0.0;  // > 0: iterate the corrector to this fixed-point tolerance instead
  bool drop_v = false;  // classical closed equations (v = 0), RS only
};

int grid_steps(double T, double h);

// f0'(1) making K'(0) = 0
double default_f0_slope(const InitCondition& ic, double beta);

TwoTimeSolution solve_dynamics(const InitCondition& ic, const SolverConfig& cfg);

struct Residual {
  double R = 0, C = 0, q = 0, H = 0, L = 0, mu = 0;
};
Residual residual(const TwoTimeSolution& sol, const InitCondition& ic, const SolverConfig& cfg);

struct PsdReport {
  double min_eig_C;
  double min_eig_Cbar;  // equals min_eig_C when q_star = 0
  bool ok;
};
PsdReport psd_check(const TwoTimeSolution& sol, const InitCondition& ic, int points = 30, double tol = 1e-6);

struct EllRow {
  double ell;
  double sup_K_minus_1;
  double dist_to_spherical;
};
std::vector<EllRow> ell_limit_check(const InitCondition& ic, double beta, double T, double h,
                                    const std::vector<double>& ells);

struct Distance {
  double C = 0, R = 0, q = 0, H = 0;
  double max() const;
};
// sup-distances on the grid of `coarse`; fine.h must divide coarse.h
Distance sup_distance(const TwoTimeSolution& coarse, const TwoTimeSolution& fine);

}  // namespace sg
