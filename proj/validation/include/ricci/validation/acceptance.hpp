#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ricci::validation {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values behind the verdict
  double seconds = 0.0;
};

struct ValidationOptions {
  // Runs criteria whose name contains this substring or whose id equals it.
  std::string filter;
  // Sensitivity smoke test: perturbs the closed-form star curvature by 1e-7
  // so the star check must fail.
  bool mutate_star_formula = false;
  std::uint64_t seed = 20240611;
};

struct CriterionInfo {
  int id;
  const char* name;
};
const std::vector<CriterionInfo>& criteria();

std::vector<CriterionResult> run_validation(const ValidationOptions& options);

// "[PASS] 3 collapsing-regime (1.23 s): detail"
std::string format_result(const CriterionResult& r);

}  // namespace ricci::validation
