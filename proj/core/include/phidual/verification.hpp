#pragma once

#include <functional>
#include <string>
#include <vector>

namespace phidual {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

// Runs every acceptance criterion; `on_result` (if set) sees each result as
// soon as it is available.
std::vector<CriterionResult> run_acceptance_suite(
    const std::function<void(const CriterionResult&)>& on_result = {});

// One line: "[PASS] 4  classical vs augmented gap ... (0.41 s) detail".
std::string format_criterion(const CriterionResult& r);

}  // namespace phidual
