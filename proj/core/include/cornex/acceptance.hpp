#pragma once

#include <string>
#include <utility>
#include <vector>

namespace cornex {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  double seconds = 0;
  double budget = 0;  // seconds; 0 when unbounded
  std::vector<std::pair<std::string, double>> metrics;
  std::string detail;
};

/// Criteria 1..9; `only` restricts the run to the listed ids.
std::vector<CriterionResult> run_acceptance(const std::vector<int>& only = {});
CriterionResult run_criterion(int id);

/// "PASS 3 smoothness-gain (12.1 s): detail"
std::string summary_line(const CriterionResult& r);

}  // namespace cornex
