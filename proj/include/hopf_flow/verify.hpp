#pragma once

#include <string>
#include <vector>

#include "hopf_flow/diagnostics.hpp"
#include "hopf_flow/first_integral.hpp"

#include <json.hpp>

namespace hopf_flow {

struct VerifyOptions {
  /// Multiplies every check tolerance; < 1 tightens.
  double tol_scale = 1.0;
  /// Report names to run; empty runs everything.
  std::vector<std::string> only;
  double c2 = 1.0;
  GaugeF1 f1;
  /// Side of the parametric residual grids (the first-integral grids use half).
  std::size_t grid = 20;
};

/// One acceptance criterion: its reports, wall time and time budget.
struct CriterionResult {
  std::string id;  // "A1" ... "A8"
  std::string title;
  std::vector<ResidualReport> reports;
  double seconds = 0.0;
  double budget_seconds = 0.0;

  /// All reports pass or carry an allowlisted documented discrepancy.
  bool ok() const;
};

struct VerifyOutcome {
  std::vector<CriterionResult> criteria;

  bool ok() const;
  /// 0 when ok(), 1 otherwise.
  int exit_code() const { return ok() ? 0 : 1; }
  nlohmann::json to_json() const;
};

/// Every report name the battery can produce, in run order.
std::vector<std::string> check_names();

/// Report names allowed to end as documented-discrepancy.
const std::vector<std::string>& documented_allowlist();
bool is_allowlisted(const std::string& report_name);

/// Throws UsageError for an unknown name in options.only.
VerifyOutcome run_verify(const VerifyOptions& options = {});

}  // namespace hopf_flow
