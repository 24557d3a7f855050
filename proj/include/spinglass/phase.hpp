#pragma once

#include "spinglass/mixture.hpp"

namespace sg {

struct ScanOptions {
  int grid_points = 10000;
  double x_margin = 1e-6;  // scan [0, 1 - x_margin]
};

double beta_c_stat(const Mixture& m, const ScanOptions& opt = {});
double beta_c_dyn(const Mixture& m, const ScanOptions& opt = {});
double q_d(const Mixture& m, double beta, const ScanOptions& opt = {});
// sup{x in [0,1]: g'_beta(x) >= 1/2 - gamma}; throws gamma_too_small when empty
double c_inf(const Mixture& m, double beta, double gamma, const ScanOptions& opt = {});

struct BandRelaxation {
  double gamma_beta;
  double c_inf;
  bool fast;
  double beta_c_dyn_effective;
  bool fast_predicted;  // beta < beta_c_dyn of the effective mixture
};
BandRelaxation band_relaxation_predicate(const Mixture& m, double beta, double q_beta);

enum class Regime { RS, RSB };

struct PhasePoint {
  double beta;
  double beta_c_dyn;
  double beta_c_stat;
  double q_d;
  Regime regime;  // RS when beta <= beta_c_stat
};
PhasePoint phase_point(const Mixture& m, double beta, double bcd, double bcs);

}  // namespace sg
