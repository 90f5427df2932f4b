#pragma once

#include <cstddef>
#include <iosfwd>

namespace hopf_flow::cli {

/// Every default in one place; README mirrors this table.
struct Defaults {
  static constexpr double rel_tol = 1e-10;
  static constexpr double abs_tol = 1e-12;
  static constexpr double max_step = 1.0;
  static constexpr double c2 = 1.0;
  static constexpr std::size_t grid = 20;      // rho grid side and verify probe grid
  static constexpr std::size_t samples = 101;  // reduce / implicit sweep rows
  static constexpr double span = 10.0;
  static constexpr double verify_tol_scale = 1.0;
};

enum ExitCode : int { kOk = 0, kCheckFailure = 1, kUsage = 2 };

/// Entry point of the hopf-flow tool. Data goes to `out` unless --out is given;
/// diagnostics go to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hopf_flow::cli
