#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spinglass/dynamics.hpp"
#include "spinglass/langevin.hpp"

namespace sg {

// JSON inputs. Unknown keys and ill-typed values raise Code::invalid.
//
// mixture: {"coeffs": {"2": 1.0, "3": 0.1}, "radius_bound": 1.5}   (values are b_p^2)
// init:    {"q_star": .., "q_o": .., "E": .., "E_star": .., "G_star": ..}   (omitted keys are 0)
//       or {"gibbs": {"beta0": .., "q_ea": .., "gs": ..}}
// solve:   {"mixture": {..}, "init": {..}, "beta": .., "T": .., "h": .., "variant": "spherical" | "f:ELL" | "gradflow",
//           "f0_slope": .., "corrector_iters": 2}
// simulate:{"mixture": {..}, "init": {..}, "N": .., "beta": .., "T": .., "h": .., "paths": 8,
//           "variant": "spherical" | "f:ELL", "f0_slope": .., "substeps": 5, "r_guard": 2, "seed": 1,
//           "disorder_seed": 1, "x0_seed": 2}

struct InitConfig {
  bool gibbs = false;
  InitSpec spec;
  double beta0 = 0.0, q_ea = 0.0, gs = 0.0;

  InitCondition build(const Mixture& m) const;
};

struct SolveConfig {
  Mixture mixture;
  InitConfig init;
  SolverConfig solver;
};

struct SimConfig {
  Mixture mixture;
  InitConfig init;
  int N = 100;
  int paths = 8;
  std::uint64_t disorder_seed = 1, x0_seed = 2;
  SdeConfig sde;
  // solution grid for comparisons: h / substeps
  SolverConfig solver() const;
};

Mixture parse_mixture(const std::string& json);
InitConfig parse_init(const std::string& json);
SolveConfig parse_solve(const std::string& json);
SimConfig parse_sim(const std::string& json);

// "spherical", "gradflow", "f:ELL"
void parse_variant(const std::string& s, SolverConfig& cfg);

std::string read_file(const std::string& path);  // throws Code::invalid when unreadable

}  // namespace sg
