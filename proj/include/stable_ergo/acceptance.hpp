#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace stable_ergo {

enum class CriterionStatus { pass, fail, skip };

const char* to_string(CriterionStatus s);

struct CriterionResult {
  int id = 0;
  std::string title;
  CriterionStatus status = CriterionStatus::fail;
  std::string detail;
  double seconds = 0.0;
  double budget_seconds = 0.0;

  /// "criterion  7  PASS   41.2s  <title>: <detail>"
  std::string line() const;
  nlohmann::json to_json() const;
};

struct AcceptanceOptions {
  bool quick = false;  // skips the long eigen and simulation criteria
  std::uint64_t seed = 12345;
  /// Test hook: replaces omega_alpha on the bound side of the Green and II
  /// inequalities so the checks can be seen to fail.
  std::optional<double> omega_override;
  std::vector<int> only;  // empty runs every criterion
};

/// Runs the acceptance criteria in order. A criterion passes only when its
/// check holds and it finished inside its runtime budget. Exceptions thrown by
/// a check are reported as failures.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {},
                                            void (*on_result)(const CriterionResult&) = nullptr);

bool all_passed(const std::vector<CriterionResult>& results);

}  // namespace stable_ergo
