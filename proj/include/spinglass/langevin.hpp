#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spinglass/dynamics.hpp"
#include "spinglass/hamiltonian.hpp"

namespace sg {

enum class SdeVariant { FConfined, SphericalProjected };

struct SdeConfig {
  double beta = 0.0;
  double T = 1.0;
  double h_obs = 0.05;
  int substeps = 5;  // SDE step is h_obs / substeps
  SdeVariant variant = SdeVariant::SphericalProjected;
  double ell = 50.0;
  double f0_slope = 0.5;  // f'(r) = 2 ell (r - 1) + f0_slope
  double r_guard = 2.0;
  std::uint64_t seed = 1;
};

// x_t and B_t at t = k h_obs.
struct Trajectory {
  int N = 0;
  int n = 0;
  double h_obs = 0.0;
  std::uint64_t seed = 0;
  std::vector<Eigen::VectorXd> x, B;
  bool escaped = false;
  double escape_time = -1.0;
};

// noise_rotation, when given, replaces each Gaussian increment dB by O dB.
Trajectory integrate(const Field& f, const ConditioningSpec& spec, const SdeConfig& cfg,
                     const Eigen::MatrixXd* noise_rotation = nullptr);

struct ObservableSet {
  int n = 0;
  double h = 0.0;
  std::vector<double> C, chi;  // packed, i >= j
  std::vector<double> q, H, K;
};
ObservableSet observables(const Trajectory& tr, const Field& f, const ConditioningSpec& spec);

struct ErrorTerms {
  double C = 0, chi = 0, q = 0, H = 0;
  double total = 0;  // sum of the four terms, each capped at 1
};
// sol.h must divide obs.h; compares on [0, T]
ErrorTerms error_functional(const ObservableSet& obs, const TwoTimeSolution& sol, double T);

struct RotationReport {
  double max_diff;
  bool pass;
};
// Runs (x0, x_star, f) and (O x0, O x_star, f(O^T .)) with noise O dB (or dB when rotate_noise is false).
RotationReport rotation_invariance_test(const Field& f, const ConditioningSpec& spec, const Eigen::MatrixXd& O,
                                        const SdeConfig& cfg, bool rotate_noise = true, double tol = 1e-9);

struct McReport {
  std::vector<double> errors;
  std::vector<ErrorTerms> terms;
  double err_mean = 0, err_se = 0;
  int escaped = 0;
};
// Path k uses seed (cfg.seed, k). Paths run concurrently.
struct Ensemble {
  std::vector<ObservableSet> obs;  // empty entries for escaped paths
  std::vector<char> escaped;
  int escaped_count = 0;
  ObservableSet mean;  // over paths that did not escape
};
Ensemble run_paths(const Field& f, const ConditioningSpec& spec, const SdeConfig& cfg, int paths);
// escaped paths count as 4
McReport report(const Ensemble& en, const TwoTimeSolution& sol, double T);
McReport mc_compare(const Field& f, const ConditioningSpec& spec, const SdeConfig& cfg, const TwoTimeSolution& sol,
                    int paths);

}  // namespace sg
