#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "csv.hpp"
#include "hopf_flow/error.hpp"
#include "hopf_flow/fields.hpp"
#include "hopf_flow/first_integral.hpp"
#include "hopf_flow/flows.hpp"
#include "hopf_flow/integrator.hpp"
#include "hopf_flow/parallel.hpp"
#include "hopf_flow/reduced_system.hpp"
#include "hopf_flow/verify.hpp"

namespace hopf_flow::cli {

namespace {

using nlohmann::json;

// Reads a JSON object as CLI11 config. Plain keys apply to the selected
// subcommand; an object keyed by a subcommand name applies to that one only.
class JsonConfig : public CLI::Config {
 public:
  explicit JsonConfig(const CLI::App* app) : app_(app) {}

  std::string to_config(const CLI::App*, bool, bool, std::string) const override { return "{}"; }

  std::vector<CLI::ConfigItem> from_config(std::istream& is) const override {
    json doc;
    try {
      is >> doc;
    } catch (const json::exception& e) {
      throw CLI::ConversionError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) throw CLI::ConversionError("config must be a JSON object");
    const auto subs = app_->get_subcommands();
    if (subs.empty()) return {};
    const std::string sub = subs.front()->get_name();
    std::vector<CLI::ConfigItem> items;
    auto add = [&](const std::string& key, const json& value) {
      if (key == "config" || value.is_null()) return;
      CLI::ConfigItem it;
      it.parents = {sub};
      it.name = key;
      if (value.is_array()) {
        for (const auto& v : value) it.inputs.push_back(scalar(v));
      } else {
        it.inputs.push_back(scalar(value));
      }
      items.push_back(std::move(it));
    };
    for (const auto& [key, value] : doc.items()) {
      if (value.is_object()) {
        if (key != sub) continue;  // section of another subcommand
        for (const auto& [k, v] : value.items()) add(k, v);
      } else {
        add(key, value);
      }
    }
    return items;
  }

 private:
  static std::string scalar(const json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
    if (v.is_number()) return v.dump();
    throw CLI::ConversionError("config values must be scalars or arrays of scalars");
  }

  const CLI::App* app_;
};

struct Output {
  std::string path;
  std::string format = "csv";
};

void add_output(CLI::App* cmd, Output& o) {
  cmd->add_option("--out", o.path, "Output file (default: stdout)");
  cmd->add_option("--format", o.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
}

json table_json(const Table& t) {
  json rows = json::array();
  for (const auto& r : t.rows) rows.push_back(r);
  return {{"columns", t.columns}, {"rows", rows}};
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      os_ = &fallback;
    } else {
      file_.open(path);
      if (!file_) throw Error("cannot open output file '" + path + "'");
      os_ = &file_;
    }
  }
  std::ostream& stream() { return *os_; }
  void close(const std::string& path) {
    os_->flush();
    if (!*os_) throw Error("write failed for '" + (path.empty() ? "stdout" : path) + "'");
  }

 private:
  std::ofstream file_;
  std::ostream* os_ = nullptr;
};

// Writes the table (plus meta for JSON); with `sidecar`, CSV output to a
// file also gets <path>.meta.json.
void emit(const Output& o, const Table& t, const json& meta, bool sidecar, std::ostream& out) {
  Sink sink(o.path, out);
  if (o.format == "json") {
    json doc = table_json(t);
    if (!meta.is_null()) doc["meta"] = meta;
    sink.stream() << doc.dump(1) << '\n';
  } else {
    write_csv(sink.stream(), t);
  }
  sink.close(o.path);
  if (sidecar && o.format == "csv" && !o.path.empty()) {
    const std::string side = o.path + ".meta.json";
    Sink s(side, out);
    s.stream() << meta.dump(1) << '\n';
    s.close(side);
  }
}

IntegratorConfig integrator_config(double rtol, double atol, double max_step) {
  IntegratorConfig cfg;
  cfg.rel_tol = rtol;
  cfg.abs_tol = atol;
  cfg.max_step = max_step;
  cfg.min_step = std::min(cfg.min_step, max_step);
  try {
    cfg.validate();
  } catch (const DomainError& e) {
    throw UsageError(e.what());
  }
  return cfg;
}

json meta_json(const TrajectoryMeta& m) {
  json j{{"rel_tol", m.rel_tol},
         {"abs_tol", m.abs_tol},
         {"accepted_steps", m.accepted_steps},
         {"rejected_steps", m.rejected_steps},
         {"evaluations", m.evaluations},
         {"stop_reason", to_string(m.stop_reason)}};
  if (!m.event_name.empty()) j["event"] = m.event_name;
  return j;
}

Hemisphere parse_branch(const std::string& b) { return b == "lower" ? Hemisphere::Lower : Hemisphere::Upper; }
ImplicitForm parse_implicit_form(const std::string& f) {
  return f == "real" ? ImplicitForm::RealK : ImplicitForm::ContinuedK;
}
RhoForm parse_rho_form(const std::string& f) {
  return f == "continued" ? RhoForm::Continued : RhoForm::Principal;
}

double psi_of(double H, Hemisphere b) { return ReducedState{0.0, H, b}.psi(); }

std::complex<double> c1_row(double r, double H, ImplicitForm form) {
  try {
    return implicit_constant(r, H, form).c1;
  } catch (const Error&) {
    return {std::nan(""), std::nan("")};
  }
}

// ---------------------------------------------------------------- trace

struct TraceArgs {
  std::string mode = "cartesian";
  std::vector<double> start;
  double span = Defaults::span;
  double dt = 0.0;
  double rel_tol = Defaults::rel_tol;
  double abs_tol = Defaults::abs_tol;
  double max_step = Defaults::max_step;
  Output out;
};

int cmd_trace(const TraceArgs& a, std::ostream& out, std::ostream& err) {
  if (a.start.size() != 3) throw UsageError("trace: --start needs three values");
  if (!std::isfinite(a.span)) throw UsageError("trace: --span must be finite");
  if (a.dt < 0.0) throw UsageError("trace: --dt must be >= 0");
  const bool spherical = a.mode == "spherical";
  if (spherical) {
    const double r = a.start[0], psi = a.start[2];
    if (!(r > kGuardRadius)) throw UsageError("trace: singularity: spherical start needs r > 0");
    if (!(std::abs(std::sin(psi)) > kGuardSinPsi)) {
      throw UsageError("trace: singularity: spherical start on the z-axis (sin psi = 0)");
    }
  }
  const VectorField field = spherical ? spherical_flow() : cartesian_flow();
  IntegratorConfig cfg = integrator_config(a.rel_tol, a.abs_tol, a.max_step);
  if (spherical) cfg.events = spherical_guards();
  const Trajectory tr = integrate(field, a.start, 0.0, a.span, cfg);

  Table t;
  t.columns = spherical ? std::vector<std::string>{"t", "r", "phi", "psi"}
                        : std::vector<std::string>{"t", "x", "y", "z"};
  std::vector<double> times;
  for (const auto& s : tr.samples) times.push_back(s.t);
  if (a.dt > 0.0) {
    const double dir = tr.t_end() >= 0.0 ? 1.0 : -1.0;
    for (std::size_t k = 0;; ++k) {
      const double tk = dir * a.dt * double(k);
      if (std::abs(tk) > std::abs(tr.t_end())) break;
      times.push_back(tk);
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());
  if (tr.t_end() < 0.0) std::reverse(times.begin(), times.end());
  for (double tk : times) {
    const Sample* s = tr.find_exact(tk);
    const State y = s ? s->y : tr.at(tk);
    t.rows.push_back({tk, y[0], y[1], y[2]});
  }

  json meta = meta_json(tr.meta);
  meta["command"] = "trace";
  meta["mode"] = a.mode;
  meta["start"] = a.start;
  meta["span"] = a.span;
  meta["t_end"] = tr.t_end();
  meta["rows"] = t.rows.size();
  meta["dense_dt"] = a.dt;
  meta["path_length"] = spherical ? json(nullptr) : json(tr.path_length());
  if (tr.meta.stop_reason != StopReason::ReachedEnd) {
    err << "trace: stopped at t=" << format_number(tr.t_end()) << " (" << to_string(tr.meta.stop_reason)
        << (tr.meta.event_name.empty() ? "" : ": " + tr.meta.event_name) << ")\n";
  }
  emit(a.out, t, meta, true, out);
  return kOk;
}

// ---------------------------------------------------------------- field

struct FieldArgs {
  std::string mode = "cartesian";
  std::vector<double> point;
  Output out;
};

int cmd_field(const FieldArgs& a, std::ostream& out) {
  if (a.point.size() != 3) throw UsageError("field: --point needs three values");
  Table t;
  if (a.mode == "spherical") {
    const SphericalState s{a.point[0], a.point[1], a.point[2], false};
    const SphericalVelocity v = eval_spherical(s);
    t.columns = {"r", "phi", "psi", "dr", "dphi", "dpsi"};
    t.rows.push_back({s.r, s.phi, s.psi, v.dr, v.dphi, v.dpsi});
  } else {
    const CartesianState p{a.point[0], a.point[1], a.point[2]};
    const Velocity3 v = eval_cartesian(p);
    const DerivedRates dr = derived_rates(p);
    t.columns = {"x", "y", "z", "vx", "vy", "vz", "norm", "rate_arctan", "rate_r2"};
    t.rows.push_back({p.x, p.y, p.z, v.vx, v.vy, v.vz, std::hypot(v.vx, v.vy, v.vz),
                      dr.rate_arctan.value_or(std::nan("")), dr.rate_r2});
  }
  emit(a.out, t, json{{"command", "field"}, {"mode", a.mode}}, false, out);
  return kOk;
}

// ---------------------------------------------------------------- reduce

struct ReduceArgs {
  double r0 = 0.0, H0 = 0.0, r1 = 0.0;
  std::size_t samples = Defaults::samples;
  std::string branch = "upper";
  std::string form = "continued";
  bool follow_folds = false;
  double r_min = 1e-3, r_max = 1e3;
  double rel_tol = Defaults::rel_tol;
  double abs_tol = Defaults::abs_tol;
  Output out;
};

// H-equation residual with dH/dr = sin(2 psi) (dpsi/dt) / (dr/dt) taken from
// the spherical system: ties each output row back to the full flow.
double flow_h_residual(double r, double H, double psi) {
  const SphericalVelocity v = eval_spherical({r, 0.0, psi, false});
  if (v.dr == 0.0) return std::nan("");
  return h_equation_residual(r, H, std::sin(2.0 * psi) * v.dpsi / v.dr);
}

int cmd_reduce(const ReduceArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.r0 > 0.0) || !(a.r1 > 0.0)) throw UsageError("reduce: --r0 and --r1 must be positive");
  if (!(a.H0 >= 0.0 && a.H0 <= 1.0)) throw UsageError("reduce: --H0 must lie in [0, 1]");
  if (a.samples < 2) throw UsageError("reduce: --samples must be >= 2");
  const Hemisphere branch = parse_branch(a.branch);
  const ImplicitForm form = parse_implicit_form(a.form);
  Table t;
  t.columns = {"r", "H", "psi", "C1_re", "C1_im", "turning_coef", "h_residual"};
  json meta{{"command", "reduce"}, {"r0", a.r0}, {"H0", a.H0}, {"r1", a.r1}, {"form", to_string(form)}};

  if (a.follow_folds) {
    IntegratorConfig cfg = integrator_config(a.rel_tol, a.abs_tol, 0.05);
    const ReducedCurve curve =
        trace_reduced_curve(ReducedState{a.r0, a.H0, branch}, a.r1, a.r_min, a.r_max, 8, cfg);
    for (const auto& p : curve.points) {
      const auto c1 = c1_row(p.r, p.H, form);
      t.rows.push_back({p.r, p.H, p.psi, c1.real(), c1.imag(), h_turning_coefficient(p.r, p.H),
                        flow_h_residual(p.r, p.H, p.psi)});
    }
    meta["turning_points"] = curve.turning_points;
    meta["stop"] = curve.stop;
  } else {
    IntegratorConfig cfg = integrator_config(a.rel_tol, a.abs_tol, std::abs(a.r1 - a.r0) / 4.0 + 1e-12);
    for (std::size_t k = 0; k < a.samples; ++k) {
      cfg.stops.push_back(a.r0 + (a.r1 - a.r0) * double(k) / double(a.samples - 1));
    }
    const Trajectory tr = integrate_h(a.r0, a.H0, a.r1, cfg);
    for (double r : cfg.stops) {
      const Sample* s = tr.find_exact(r);
      if (!s) continue;
      const double H = s->y[0];
      const auto c1 = c1_row(r, H, form);
      const double psi = psi_of(H, branch);
      t.rows.push_back({r, H, psi, c1.real(), c1.imag(), h_turning_coefficient(r, H),
                        flow_h_residual(r, H, psi)});
    }
    meta.update(meta_json(tr.meta));
    if (tr.meta.stop_reason != StopReason::ReachedEnd) {
      err << "reduce: stopped at r=" << format_number(tr.t_end()) << " ("
          << to_string(tr.meta.stop_reason)
          << (tr.meta.event_name.empty() ? "" : ": " + tr.meta.event_name) << ")\n";
    }
  }
  emit(a.out, t, meta, false, out);
  return kOk;
}

// ---------------------------------------------------------------- implicit

struct ImplicitArgs {
  std::optional<double> c1;
  std::optional<double> r0, H0;
  std::vector<double> r_range;
  std::vector<double> bracket;
  std::size_t samples = Defaults::samples;
  std::string branch = "upper";
  std::string form = "continued";
  Output out;
};

int cmd_implicit(const ImplicitArgs& a, std::ostream& out, std::ostream& err) {
  if (a.bracket.size() != 2) throw UsageError("implicit: --bracket H_lo,H_hi is required");
  if (a.r_range.size() != 2) throw UsageError("implicit: --r-range r_a,r_b is required");
  if (!(a.bracket[0] < a.bracket[1])) throw UsageError("implicit: empty --bracket");
  if (a.samples < 1) throw UsageError("implicit: --samples must be >= 1");
  const ImplicitForm form = parse_implicit_form(a.form);
  ImplicitConstant k;
  if (a.c1) {
    if (a.r0 || a.H0) throw UsageError("implicit: give either --c1 or --r0/--H0");
    k.form = form;
    k.effective = *a.c1;
    k.c1 = form == ImplicitForm::ContinuedK ? std::complex<double>(*a.c1, std::numbers::pi)
                                            : std::complex<double>(*a.c1, 0.0);
  } else if (a.r0 && a.H0) {
    k = implicit_constant(*a.r0, *a.H0, form);
  } else {
    throw UsageError("implicit: need --c1 or both --r0 and --H0");
  }
  const Hemisphere branch = parse_branch(a.branch);
  Table t;
  t.columns = {"r", "H", "psi", "C1_re", "C1_im", "residual", "roots_in_bracket"};
  std::size_t warnings = 0;
  for (std::size_t i = 0; i < a.samples; ++i) {
    const double r = a.samples == 1 ? a.r_range[0]
                                    : a.r_range[0] + (a.r_range[1] - a.r_range[0]) * double(i) /
                                                         double(a.samples - 1);
    const ImplicitRoot root = solve_implicit(k, r, a.bracket[0], a.bracket[1]);
    if (root.multiplicity_warning) ++warnings;
    t.rows.push_back({r, root.H, psi_of(root.H, branch), k.c1.real(), k.c1.imag(), root.residual,
                      double(root.roots_in_bracket)});
  }
  if (warnings) {
    err << "implicit: " << warnings << " rows had several roots in the bracket; nearest to midpoint kept\n";
  }
  emit(a.out, t,
       json{{"command", "implicit"}, {"form", to_string(form)}, {"effective_c1", k.effective}}, false, out);
  return kOk;
}

// ---------------------------------------------------------------- rho

struct RhoArgs {
  std::vector<double> xi_range = {0.05, 0.78};
  std::vector<double> psi_range = {0.1, std::numbers::pi - 0.1};
  std::size_t grid = Defaults::grid;
  double c2 = Defaults::c2;
  std::vector<double> f1;
  std::string form = "principal";
  Output out;
};

int cmd_rho(const RhoArgs& a, std::ostream& out) {
  if (a.xi_range.size() != 2 || a.psi_range.size() != 2) {
    throw UsageError("rho: --xi-range and --psi-range need two values");
  }
  if (!(a.xi_range[0] > 0.0 && a.xi_range[0] <= a.xi_range[1])) {
    throw UsageError("rho: --xi-range must satisfy 0 < lo <= hi");
  }
  if (!(a.psi_range[0] > 0.0 && a.psi_range[0] <= a.psi_range[1] && a.psi_range[1] < std::numbers::pi)) {
    throw UsageError("rho: --psi-range must lie inside (0, pi)");
  }
  if (a.grid < 1) throw UsageError("rho: --grid must be >= 1");
  const RhoForm form = parse_rho_form(a.form);
  const GaugeF1 f1{a.f1};
  const std::size_t n = a.grid;
  auto node = [n](const std::vector<double>& r, std::size_t i) {
    return n == 1 ? r[0] : r[0] + (r[1] - r[0]) * double(i) / double(n - 1);
  };
  Table t;
  t.columns = {"xi",   "psi",  "rho_re", "rho_im",       "u",          "v",
               "u_im", "v_im", "ln_chi", "pde_residual", "real_region"};
  t.rows.resize(n * n);
  parallel_for(n * n, [&](std::size_t k) {
    const ParamPoint p{node(a.xi_range, k / n), node(a.psi_range, k % n), a.c2};
    const RhoValue rv = rho_eval(p, f1, form);
    const UVPair uv = uv_from_rho(p, f1, form);
    const PdeResidual pde = linear_pde_residual(p, f1, form);
    t.rows[k] = {p.xi,        p.psi,       rv.rho.real(),
                 rv.rho.imag(), uv.u.real(), uv.v.real(),
                 uv.u.imag(),   uv.v.imag(), -std::atanh(std::cos(p.psi)),
                 pde.scaled,    rv.real_region ? 1.0 : 0.0};
  });
  emit(a.out, t, json{{"command", "rho"}, {"form", to_string(form)}, {"c2", a.c2}, {"f1", a.f1}},
       false, out);
  return kOk;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  double tol_scale = Defaults::verify_tol_scale;
  std::vector<std::string> only;
  std::size_t grid = Defaults::grid;
  double c2 = Defaults::c2;
  std::vector<double> f1;
  Output out{"", "json"};
};

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
  VerifyOptions opt;
  opt.tol_scale = a.tol_scale;
  opt.only = a.only;
  opt.grid = a.grid;
  opt.c2 = a.c2;
  opt.f1 = GaugeF1{a.f1};
  const VerifyOutcome res = run_verify(opt);
  for (const auto& c : res.criteria) {
    for (const auto& r : c.reports) {
      err << c.id << ' ' << r.name << ": " << to_string(r.verdict) << " (max_abs "
          << format_number(r.max_abs) << ", tolerance " << format_number(r.tolerance) << ")\n";
    }
    if (c.seconds > c.budget_seconds) {
      err << c.id << ": over time budget (" << c.seconds << " s > " << c.budget_seconds << " s)\n";
    }
  }
  Sink sink(a.out.path, out);
  if (a.out.format == "csv") {
    sink.stream() << "name,samples,max_abs,rms,verdict,tolerance\n";
    for (const auto& c : res.criteria) {
      for (const auto& r : c.reports) {
        sink.stream() << r.name << ',' << r.samples << ',' << format_number(r.max_abs) << ','
                      << format_number(r.rms) << ',' << to_string(r.verdict) << ','
                      << format_number(r.tolerance) << '\n';
      }
    }
  } else {
    sink.stream() << res.to_json().dump(1) << '\n';
  }
  sink.close(a.out.path);
  return res.exit_code();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Integral curves and first integrals of the Hopf vector field", "hopf-flow"};
  app.require_subcommand(1);
  app.fallthrough();  // --config may follow the subcommand
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.config_formatter(std::make_shared<JsonConfig>(&app));
  app.set_config("--config", "", "JSON config file (command-line flags override it)");

  TraceArgs trace;
  auto* c_trace = app.add_subcommand("trace", "Integrate an integral curve");
  c_trace->add_option("--mode", trace.mode, "cartesian or spherical")
      ->check(CLI::IsMember({"cartesian", "spherical"}))
      ->capture_default_str();
  c_trace->add_option("--start", trace.start, "x,y,z or r,phi,psi")->delimiter(',')->required();
  c_trace->add_option("--span", trace.span, "Flow-time span (may be negative)")->capture_default_str();
  c_trace->add_option("--dt", trace.dt, "Extra dense rows every dt (0: none)")->capture_default_str();
  c_trace->add_option("--tol", trace.rel_tol, "Relative tolerance")->capture_default_str();
  c_trace->add_option("--abs-tol", trace.abs_tol, "Absolute tolerance")->capture_default_str();
  c_trace->add_option("--max-step", trace.max_step, "Largest step")->capture_default_str();
  add_output(c_trace, trace.out);

  FieldArgs field;
  auto* c_field = app.add_subcommand("field", "Evaluate the vector field at a point");
  c_field->add_option("--mode", field.mode, "cartesian or spherical")
      ->check(CLI::IsMember({"cartesian", "spherical"}))
      ->capture_default_str();
  c_field->add_option("--point", field.point, "x,y,z or r,phi,psi")->delimiter(',')->required();
  add_output(c_field, field.out);

  ReduceArgs reduce;
  auto* c_reduce = app.add_subcommand("reduce", "Integrate the reduced H(r) equation");
  c_reduce->add_option("--r0", reduce.r0, "Starting radius")->required();
  c_reduce->add_option("--H0", reduce.H0, "Starting H = sin^2 psi, in [0, 1]")->required();
  c_reduce->add_option("--r1", reduce.r1, "Target radius")->required();
  c_reduce->add_option("--samples", reduce.samples, "Evenly spaced output radii (ignored with --follow-folds)")->capture_default_str();
  c_reduce->add_option("--branch", reduce.branch, "psi hemisphere: upper or lower")
      ->check(CLI::IsMember({"upper", "lower"}))
      ->capture_default_str();
  c_reduce->add_option("--form", reduce.form, "Bessel K reading: continued or real")
      ->check(CLI::IsMember({"continued", "real"}))
      ->capture_default_str();
  c_reduce->add_flag("--follow-folds", reduce.follow_folds, "Continue through turning points");
  c_reduce->add_option("--r-min", reduce.r_min, "Lower radius bound with --follow-folds")->capture_default_str();
  c_reduce->add_option("--r-max", reduce.r_max, "Upper radius bound with --follow-folds")->capture_default_str();
  c_reduce->add_option("--tol", reduce.rel_tol, "Relative tolerance")->capture_default_str();
  c_reduce->add_option("--abs-tol", reduce.abs_tol, "Absolute tolerance")->capture_default_str();
  add_output(c_reduce, reduce.out);

  ImplicitArgs impl;
  auto* c_impl = app.add_subcommand("implicit", "Solve the implicit Bessel relation for H(r)");
  c_impl->add_option("--c1", impl.c1, "Effective real constant");
  c_impl->add_option("--r0", impl.r0, "Take the constant from the point (r0, H0)");
  c_impl->add_option("--H0", impl.H0, "H at r0");
  c_impl->add_option("--r-range", impl.r_range, "r_a,r_b")->delimiter(',');
  c_impl->add_option("--bracket", impl.bracket, "H_lo,H_hi")->delimiter(',');
  c_impl->add_option("--samples", impl.samples, "Evenly spaced radii over --r-range")->capture_default_str();
  c_impl->add_option("--branch", impl.branch, "psi hemisphere of the output column")->check(CLI::IsMember({"upper", "lower"}))->capture_default_str();
  c_impl->add_option("--form", impl.form, "Bessel K reading: continued or real")->check(CLI::IsMember({"continued", "real"}))->capture_default_str();
  add_output(c_impl, impl.out);

  RhoArgs rho;
  auto* c_rho = app.add_subcommand("rho", "Tabulate rho, u, v on a (xi, psi) grid");
  c_rho->add_option("--xi-range", rho.xi_range, "xi_a,xi_b (xi = sin psi parameter)")->delimiter(',')->capture_default_str();
  c_rho->add_option("--psi-range", rho.psi_range, "psi_a,psi_b inside (0, pi)")->delimiter(',')->capture_default_str();
  c_rho->add_option("--grid", rho.grid, "Nodes per axis")->capture_default_str();
  c_rho->add_option("--c2", rho.c2, "Azimuthal constant c2")->capture_default_str();
  c_rho->add_option("--f1", rho.f1, "Polynomial coefficients of F1, lowest first")->delimiter(',');
  c_rho->add_option("--form", rho.form, "principal branches or the continued real form")->check(CLI::IsMember({"principal", "continued"}))->capture_default_str();
  add_output(c_rho, rho.out);

  VerifyArgs ver;
  auto* c_ver = app.add_subcommand("verify", "Run the check battery");
  c_ver->add_option("--tol", ver.tol_scale, "Multiplier applied to every tolerance")->capture_default_str();
  c_ver->add_option("--only", ver.only, "Run only these checks (repeatable)");
  c_ver->add_option("--grid", ver.grid, "Side of the parametric residual grids")->capture_default_str();
  c_ver->add_option("--c2", ver.c2, "c2 used by the first-integral checks")->capture_default_str();
  c_ver->add_option("--f1", ver.f1, "F1 coefficients used by the first-integral checks")->delimiter(',');
  c_ver->add_option("--out", ver.out.path, "Output file (default: stdout)");
  c_ver->add_option("--format", ver.out.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (c_trace->parsed()) return cmd_trace(trace, out, err);
    if (c_field->parsed()) return cmd_field(field, out);
    if (c_reduce->parsed()) return cmd_reduce(reduce, out, err);
    if (c_impl->parsed()) return cmd_implicit(impl, out, err);
    if (c_rho->parsed()) return cmd_rho(rho, out);
    if (c_ver->parsed()) return cmd_verify(ver, out, err);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kCheckFailure;
  }
  return kUsage;
}

}  // namespace hopf_flow::cli
