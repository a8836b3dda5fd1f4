#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "loopzeta/parallel.hpp"

namespace loopzeta::app {

struct CriterionResult {
  int id = 0;
  std::string title;
  bool pass = false;
  std::string detail;
  double seconds = 0.0;
};

struct AcceptanceOptions {
  std::set<int> only;  // empty: all 18
  ParallelFor parallel = serial_for;
};

inline constexpr int kCriterionCount = 18;

std::string criterion_title(int id);

/// Runs one criterion. Exceptions are reported as failures.
CriterionResult run_criterion(int id, const AcceptanceOptions& options);

/// Runs the selected criteria in order, reporting each result as it completes.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options,
                                            const std::function<void(const CriterionResult&)>& on_result = {});

/// "[PASS] 05 interval calibration: ... (0.1 s)".
std::string format_result(const CriterionResult& r);

}  // namespace loopzeta::app
