#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "hopf_flow/integrator.hpp"

#include <json.hpp>

namespace hopf_flow {

enum class Verdict { Pass, Fail, DocumentedDiscrepancy };

const char* to_string(Verdict v);

struct ResidualReport {
  std::string name;
  std::size_t samples = 0;
  double max_abs = 0.0;
  double rms = 0.0;
  Verdict verdict = Verdict::Fail;
  double tolerance = 0.0;
  std::vector<std::string> notes;
  std::vector<std::size_t> excluded;  // sample indices skipped as undefined

  bool passed() const { return verdict == Verdict::Pass; }
};

/// How a report's verdict follows from (max_abs, tolerance).
enum class VerdictPolicy {
  Strict,       ///< pass iff max_abs <= tolerance
  Documented,   ///< pass, else documented-discrepancy (a measurement)
};

/// Builds a report from raw residual values. Verdict depends only on
/// (max_abs, tolerance, policy); an empty sample set fails.
ResidualReport make_report(std::string name, std::span<const double> residuals, double tolerance,
                           VerdictPolicy policy = VerdictPolicy::Strict);

void to_json(nlohmann::json& j, const ResidualReport& r);
void from_json(const nlohmann::json& j, ResidualReport& r);

/// Quantity evaluated on a trajectory sample. Throwing any hopf_flow::Error
/// marks the sample as undefined.
using SampleQuantity = std::function<double(double t, std::span<const double> y)>;

/// Spread max |q - mean| / scale with scale = |mean| (or 1 when the mean is
/// 0). Undefined samples are excluded and listed.
ResidualReport conservation_check(std::string name, const Trajectory& traj,
                                  const SampleQuantity& quantity, double tol);

using ScalarField = std::function<double(std::span<const double> x)>;
using GradientField = std::function<std::vector<double>(std::span<const double> x)>;

/// Central differences against an analytic gradient; error per probe is
/// max_i |fd_i - g_i| / max(1, |g_i|). Probes whose stencil leaves the
/// domain (f throws) are skipped and noted.
ResidualReport fd_check(std::string name, const ScalarField& f, const GradientField& grad,
                        std::span<const std::vector<double>> probes, double tol, double h = 1e-6);

}  // namespace hopf_flow
