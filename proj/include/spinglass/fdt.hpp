#pragma once

#include <vector>

#include "spinglass/dynamics.hpp"

namespace sg {

struct FdtSolution {
  double h = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double c_inf = 0.0;
  std::vector<double> c;   // c(k h)
  std::vector<double> dc;  // c'(k h)
  double plateau_time = -1.0;  // first tau with |c(tau) - c(tau-1)| < 1e-8, or -1
  bool plateau_warning = false;  // |c(T) - c_inf| > 10 h

  double r(int k) const { return -2.0 * dc[k]; }
};

FdtSolution solve_fdt(const Mixture& m, double beta, double gamma, double T, double h);

// C(s,t) = c(s-t), R = -2c'(s-t), q = q_o, H = E, K = 1 on the FDT grid.
TwoTimeSolution stationary_two_time(const FdtSolution& f, const InitCondition& ic);

}  // namespace sg
