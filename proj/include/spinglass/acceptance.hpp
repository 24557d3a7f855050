#pragma once

#include <string>
#include <vector>

namespace sg {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::string config_dir = "configs";  // shipped solve examples, solve_*.json
};

constexpr int kCriteria = 13;

CriterionResult run_criterion(int id, const AcceptanceOptions& opt = {});
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt = {});

}  // namespace sg
