#include "hopf_flow/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "hopf_flow/error.hpp"

namespace hopf_flow {

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::DocumentedDiscrepancy: return "documented-discrepancy";
  }
  return "fail";
}

ResidualReport make_report(std::string name, std::span<const double> residuals, double tolerance,
                           VerdictPolicy policy) {
  ResidualReport rep;
  rep.name = std::move(name);
  rep.tolerance = tolerance;
  rep.samples = residuals.size();
  double sq = 0.0;
  bool finite = true;
  for (double v : residuals) {
    const double a = std::abs(v);
    if (!std::isfinite(a)) finite = false;
    rep.max_abs = std::max(rep.max_abs, a);
    sq += a * a;
  }
  if (!residuals.empty()) rep.rms = std::sqrt(sq / static_cast<double>(residuals.size()));
  if (!finite) {
    rep.max_abs = std::numeric_limits<double>::infinity();
    rep.notes.push_back("non-finite residual");
  }
  const bool ok = !residuals.empty() && finite && rep.max_abs <= tolerance;
  if (ok) {
    rep.verdict = Verdict::Pass;
  } else {
    rep.verdict = policy == VerdictPolicy::Documented && !residuals.empty()
                      ? Verdict::DocumentedDiscrepancy
                      : Verdict::Fail;
  }
  return rep;
}

void to_json(nlohmann::json& j, const ResidualReport& r) {
  j = nlohmann::json{{"name", r.name},
                     {"samples", r.samples},
                     {"max_abs", r.max_abs},
                     {"rms", r.rms},
                     {"verdict", to_string(r.verdict)},
                     {"tolerance", r.tolerance}};
  if (!r.notes.empty()) j["notes"] = r.notes;
  if (!r.excluded.empty()) j["excluded"] = r.excluded;
}

void from_json(const nlohmann::json& j, ResidualReport& r) {
  r.name = j.at("name").get<std::string>();
  r.samples = j.at("samples").get<std::size_t>();
  r.max_abs = j.at("max_abs").get<double>();
  r.rms = j.at("rms").get<double>();
  r.tolerance = j.at("tolerance").get<double>();
  const auto v = j.at("verdict").get<std::string>();
  r.verdict = v == "pass" ? Verdict::Pass
                          : (v == "documented-discrepancy" ? Verdict::DocumentedDiscrepancy : Verdict::Fail);
  r.notes = j.value("notes", std::vector<std::string>{});
  r.excluded = j.value("excluded", std::vector<std::size_t>{});
}

ResidualReport conservation_check(std::string name, const Trajectory& traj,
                                  const SampleQuantity& quantity, double tol) {
  if (traj.size() < 2) throw DomainError("conservation_check: need at least 2 samples");
  std::vector<double> values;
  std::vector<std::size_t> excluded;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    try {
      values.push_back(quantity(traj.samples[i].t, traj.samples[i].y));
    } catch (const Error&) {
      excluded.push_back(i);
    }
  }
  std::vector<double> dev;
  if (!values.empty()) {
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / values.size();
    const double scale = mean == 0.0 ? 1.0 : std::abs(mean);
    for (double v : values) dev.push_back((v - mean) / scale);
  }
  ResidualReport rep = make_report(std::move(name), dev, tol);
  rep.excluded = std::move(excluded);
  if (!rep.excluded.empty()) {
    rep.notes.push_back("partial report: " + std::to_string(rep.excluded.size()) + " samples undefined");
  }
  return rep;
}

ResidualReport fd_check(std::string name, const ScalarField& f, const GradientField& grad,
                        std::span<const std::vector<double>> probes, double tol, double h) {
  std::vector<double> errs;
  std::vector<std::size_t> skipped;
  for (std::size_t k = 0; k < probes.size(); ++k) {
    const auto& p = probes[k];
    try {
      const std::vector<double> g = grad(p);
      double worst = 0.0;
      std::vector<double> x = p;
      for (std::size_t i = 0; i < p.size(); ++i) {
        x[i] = p[i] + h;
        const double fp = f(x);
        x[i] = p[i] - h;
        const double fm = f(x);
        x[i] = p[i];
        const double fd = (fp - fm) / (2.0 * h);
        worst = std::max(worst, std::abs(fd - g[i]) / std::max(1.0, std::abs(g[i])));
      }
      errs.push_back(worst);
    } catch (const Error&) {
      skipped.push_back(k);
    }
  }
  ResidualReport rep = make_report(std::move(name), errs, tol);
  rep.excluded = std::move(skipped);
  for (std::size_t k : rep.excluded) rep.notes.push_back("probe " + std::to_string(k) + " skipped: stencil outside domain");
  return rep;
}

}  // namespace hopf_flow
