#include "hopf_flow/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "hopf_flow/error.hpp"
#include "hopf_flow/fields.hpp"
#include "hopf_flow/flows.hpp"
#include "hopf_flow/integrator.hpp"
#include "hopf_flow/parallel.hpp"
#include "hopf_flow/reduced_system.hpp"
#include "hopf_flow/special_functions.hpp"

namespace hopf_flow {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 0x5eed'4f1a'2c3bULL;

struct Ctx {
  const VerifyOptions& opt;
  double tol(double base) const { return base * opt.tol_scale; }
};

using Reports = std::vector<ResidualReport>;

std::vector<double> linspace(double a, double b, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = n == 1 ? a : a + (b - a) * double(i) / double(n - 1);
  return out;
}

IntegratorConfig tight(double rtol = 1e-12, double atol = 1e-14) {
  IntegratorConfig cfg;
  cfg.rel_tol = rtol;
  cfg.abs_tol = atol;
  cfg.max_step = 0.25;
  return cfg;
}

// ---------------------------------------------------------------- A1

Reports unit_norm(const Ctx& c) {
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> u(-10.0, 10.0);
  std::vector<double> res;
  res.reserve(10000);
  while (res.size() < 10000) {
    const CartesianState p{u(rng), u(rng), u(rng)};
    if (p.x * p.x + p.y * p.y + p.z * p.z > 100.0) continue;
    const Velocity3 v = eval_cartesian(p);
    res.push_back(std::hypot(v.vx, v.vy, v.vz) - 1.0);
  }
  return {make_report("unit-norm", res, c.tol(1e-12))};
}

// ---------------------------------------------------------------- A2

// Angle of b relative to a about the z-axis, in (-pi, pi].
double relative_angle(const State& a, const State& b) {
  return std::atan2(a[0] * b[1] - a[1] * b[0], a[0] * b[0] + a[1] * b[1]);
}

Reports rate_identities(const Ctx& c) {
  const std::vector<CartesianState> starts = {
      {1.0, 0.0, 0.0}, {0.5, 0.3, -0.2}, {2.5, 1.0, 0.5}, {-1.5, 0.5, 1.0}, {3.0, -2.0, 1.0}};
  constexpr double span = 30.0, h = 0.01;
  constexpr std::size_t n = 3001;
  std::vector<double> e_arc, e_r2;
  std::size_t near_axis = 0;
  for (const auto& s0 : starts) {
    IntegratorConfig cfg = tight();
    cfg.stops = linspace(0.0, span, n);
    const Trajectory tr = integrate(cartesian_flow(), {s0.x, s0.y, s0.z}, 0.0, span, cfg);
    std::vector<const State*> ys(n, nullptr);
    for (std::size_t k = 0; k < n; ++k) {
      const Sample* smp = tr.find_exact(cfg.stops[k]);
      if (!smp) throw Error("rate identities: stop grid not hit");
      ys[k] = &smp->y;
    }
    for (std::size_t k = 2; k + 2 < n; ++k) {
      const State& y = *ys[k];
      const double rho2 = y[0] * y[0] + y[1] * y[1];
      const DerivedRates dr = derived_rates({y[0], y[1], y[2]});
      // five-point stencils
      const double fd_arc = (-relative_angle(y, *ys[k + 2]) + 8.0 * relative_angle(y, *ys[k + 1]) -
                             8.0 * relative_angle(y, *ys[k - 1]) + relative_angle(y, *ys[k - 2])) /
                            (12.0 * h);
      auto r2 = [&](std::size_t i) { return (*ys[i])[0] * (*ys[i])[0] + (*ys[i])[1] * (*ys[i])[1]; };
      const double fd_r2 = (-r2(k + 2) + 8.0 * r2(k + 1) - 8.0 * r2(k - 1) + r2(k - 2)) / (12.0 * h);
      e_r2.push_back(fd_r2 - dr.rate_r2);
      if (rho2 < 1e-2 || !dr.rate_arctan) {
        ++near_axis;
        continue;
      }
      e_arc.push_back(fd_arc - *dr.rate_arctan);
    }
  }
  Reports out;
  out.push_back(make_report("rate-arctan-fd", e_arc, c.tol(1e-6)));
  if (near_axis) out.back().notes.push_back(std::to_string(near_axis) + " samples near the z-axis skipped");
  out.push_back(make_report("rate-r2-fd", e_r2, c.tol(1e-6)));

  std::vector<double> on_sphere;
  for (double psi : linspace(0.05, kPi - 0.05, 40)) {
    for (double phi : linspace(0.0, 2.0 * kPi, 25)) {
      const DerivedRates dr = derived_rates(from_spherical({2.0, phi, psi, false}));
      on_sphere.push_back(dr.rate_arctan.value_or(0.0));
    }
  }
  out.push_back(make_report("rate-arctan-sphere", on_sphere, c.tol(1e-14)));
  return out;
}

// ---------------------------------------------------------------- A3

Reports cartesian_spherical(const Ctx& c) {
  std::mt19937_64 rng(kSeed + 3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  std::vector<CartesianState> probes;
  while (probes.size() < 100) {
    const CartesianState p{u(rng), u(rng), u(rng)};
    if (std::hypot(p.x, p.y) < 0.1) continue;
    probes.push_back(p);
  }
  const SignReport sr = pushforward_sign(probes, c.tol(1e-10));
  ResidualReport sign_rep = make_report("pushforward-sign", std::vector<double>{sr.max_residual},
                                        c.tol(1e-10));
  sign_rep.samples = sr.probes;
  sign_rep.notes.push_back("sigma=" + std::to_string(sr.sigma) +
                           ", other sign residual=" + std::to_string(sr.other_sign_residual));
  if (!sr.consistent) sign_rep.verdict = Verdict::Fail;

  const std::vector<CartesianState> starts = {{1.0, 0.0, 0.5}, {0.4, -0.8, 1.2}, {-2.0, 1.5, -0.5}};
  constexpr double span = 10.0;
  constexpr std::size_t n = 201;
  const double sigma = sr.sigma;
  std::vector<double> diffs;
  std::vector<std::string> notes;
  for (const auto& s0 : starts) {
    IntegratorConfig cc = tight();
    cc.stops = linspace(0.0, span, n);
    const Trajectory tc = integrate(cartesian_flow(), {s0.x, s0.y, s0.z}, 0.0, span, cc);
    const SphericalState sph = to_spherical(s0);
    IntegratorConfig cs = tight();
    cs.stops = linspace(0.0, sigma * span, n);
    const Trajectory ts =
        integrate(spherical_flow(), {sph.r, sph.phi, sph.psi}, 0.0, sigma * span, cs);
    if (ts.meta.stop_reason != StopReason::ReachedEnd) {
      notes.push_back("spherical run stopped early: " + ts.meta.event_name);
    }
    for (std::size_t k = 0; k < n; ++k) {
      const Sample* a = tc.find_exact(cc.stops[k]);
      const Sample* b = ts.find_exact(cs.stops[k]);
      if (!a || !b) continue;
      const CartesianState q = from_spherical({b->y[0], b->y[1], b->y[2], false});
      diffs.push_back(std::hypot(q.x - a->y[0], q.y - a->y[1], q.z - a->y[2]));
    }
  }
  ResidualReport match = make_report("spherical-trajectory-match", diffs, c.tol(1e-6));
  match.notes = std::move(notes);
  return {sign_rep, match};
}

// ---------------------------------------------------------------- A4 / A5

struct ReducedRun {
  double r0 = 0.0, H0 = 0.0;
  std::vector<double> r, H;
  std::string stop;
};

// Samples of an H(r) solution through (r0, H0), on a fixed r grid on both
// sides of r0 up to the first event.
ReducedRun sample_reduced(double r0, double H0) {
  ReducedRun run{r0, H0, {}, {}, {}};
  auto leg = [&](double r1, std::vector<double>& rs, std::vector<double>& hs) {
    IntegratorConfig cfg = tight(1e-13, 1e-14);
    cfg.max_step = 0.05;
    cfg.stops = linspace(r0, r1, 41);
    const Trajectory tr = integrate_h(r0, H0, r1, cfg);
    for (double s : cfg.stops) {
      if (const Sample* smp = tr.find_exact(s)) {
        rs.push_back(s);
        hs.push_back(smp->y[0]);
      }
    }
    if (tr.meta.stop_reason == StopReason::HitEvent) run.stop += tr.meta.event_name + " ";
  };
  std::vector<double> rl, hl, rr, hr;
  leg(std::max(0.05, r0 - 1.0), rl, hl);
  leg(r0 + 1.0, rr, hr);
  for (std::size_t i = rl.size(); i-- > 1;) {
    run.r.push_back(rl[i]);
    run.H.push_back(hl[i]);
  }
  run.r.insert(run.r.end(), rr.begin(), rr.end());
  run.H.insert(run.H.end(), hr.begin(), hr.end());
  return run;
}

const std::vector<std::pair<double, double>>& reduced_starts() {
  static const std::vector<std::pair<double, double>> s = {{1.0, 0.5}, {3.0, 0.2}, {5.0, 0.8}};
  return s;
}

Reports implicit_first_integral(const Ctx& c) {
  std::vector<double> spreads;
  std::vector<std::string> notes;
  bool enough = true;
  for (const auto& [r0, H0] : reduced_starts()) {
    const ReducedRun run = sample_reduced(r0, H0);
    const FormSelection sel = select_implicit_form(run.r, run.H);
    const double spread = sel.form == ImplicitForm::ContinuedK ? sel.continued_spread : sel.real_spread;
    spreads.push_back(spread);
    if (run.r.size() < 20) enough = false;
    notes.push_back("(" + std::to_string(r0) + ", " + std::to_string(H0) + "): " +
                    std::to_string(run.r.size()) + " samples, form " + to_string(sel.form) +
                    ", other form spread " +
                    std::to_string(sel.form == ImplicitForm::ContinuedK ? sel.real_spread
                                                                        : sel.continued_spread));
  }
  ResidualReport rep = make_report("implicit-constant-spread", spreads, c.tol(1e-6));
  rep.notes = std::move(notes);
  if (!enough) {
    rep.verdict = Verdict::Fail;
    rep.notes.push_back("fewer than 20 samples on a curve");
  }

  const std::size_t n = 1000;
  std::vector<double> wr(n);
  const double lo = std::log(1e-3), hi = std::log(kBesselMaxArgument);
  for (std::size_t i = 0; i < n; ++i) {
    // log-spaced over (1e-3, 60]
    const double z = std::min(kBesselMaxArgument, std::exp(lo + (hi - lo) * double(i + 1) / double(n)));
    const BesselQuad q = bessel_quad(z);
    wr[i] = z * (q.i0 * q.k1 + q.i1 * q.k0) - 1.0;
  }
  return {rep, make_report("bessel-wronskian", wr, c.tol(1e-10))};
}

Reports implicit_inversion(const Ctx& c) {
  constexpr double h = 1e-4;
  std::vector<double> res, cross;
  std::size_t near_turning = 0;
  for (const auto& [r0, H0] : reduced_starts()) {
    const ReducedRun run = sample_reduced(r0, H0);
    const ImplicitConstant k = implicit_constant(r0, H0, ImplicitForm::ContinuedK);
    for (std::size_t i = 0; i < run.r.size(); ++i) {
      const double r = run.r[i], Hi = run.H[i];
      if (std::abs(h_turning_coefficient(r, Hi)) < 0.05 || Hi > 1.0 - 1e-3 || r - 2.0 * h <= 0.0) {
        ++near_turning;
        continue;
      }
      auto solve = [&](double rr) {
        const double d = 2e-3;
        return solve_implicit(k, rr, std::max(1e-9, Hi - d), std::min(1.0, Hi + d)).H;
      };
      const double H = solve(r);
      const double slope =
          (-solve(r + 2.0 * h) + 8.0 * solve(r + h) - 8.0 * solve(r - h) + solve(r - 2.0 * h)) /
          (12.0 * h);
      res.push_back(h_equation_residual(r, H, slope));
      cross.push_back(H - Hi);
    }
  }
  ResidualReport a = make_report("implicit-inversion", res, c.tol(1e-6));
  if (near_turning) a.notes.push_back(std::to_string(near_turning) + " samples near a turning locus skipped");
  return {a, make_report("implicit-vs-reduce", cross, c.tol(1e-6))};
}

// ---------------------------------------------------------------- A6

struct Grid {
  std::vector<double> xi, psi;
};

Grid real_grid(std::size_t n) {
  return {linspace(0.05, 0.78, n), linspace(0.1, kPi - 0.1, n)};
}

using PointResidual = std::function<PdeResidual(const ParamPoint&)>;

// Scaled residual map on an n x n grid; NaN marks flagged or undefined nodes.
std::vector<double> residual_map(const Ctx& c, std::size_t n, const PointResidual& f) {
  const Grid g = real_grid(n);
  std::vector<double> out(n * n);
  parallel_for(n * n, [&](std::size_t k) {
    const ParamPoint p{g.xi[k / n], g.psi[k % n], c.opt.c2};
    try {
      const PdeResidual r = f(p);
      out[k] = r.flagged ? std::nan("") : r.scaled;
    } catch (const Error&) {
      out[k] = std::nan("");
    }
  });
  return out;
}

// A measured residual map at two resolutions: the map's report (documented
// or strict) and the stability of the shared nodes.
Reports measured_map(const Ctx& c, const std::string& name, std::size_t n, double tol,
                     VerdictPolicy policy, const PointResidual& f) {
  const std::vector<double> coarse = residual_map(c, n, f);
  const std::size_t m = 2 * n - 1;
  const std::vector<double> fine = residual_map(c, m, f);
  std::vector<double> vals, diffs;
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double a = coarse[i * n + j], b = fine[(2 * i) * m + 2 * j];
      if (std::isnan(a) || std::isnan(b)) {
        ++flagged;
        continue;
      }
      vals.push_back(a);
      diffs.push_back(a - b);
    }
  }
  ResidualReport rep = make_report(name, vals, tol, policy);
  if (flagged) rep.notes.push_back(std::to_string(flagged) + " grid nodes flagged and excluded");
  return {rep, make_report(name + "-stability", diffs, c.tol(1e-10))};
}

Reports pde_chain(const Ctx& c) {
  const GaugeF1& f1 = c.opt.f1;
  const std::size_t n = std::max<std::size_t>(c.opt.grid, 2);
  const std::size_t nh = std::max<std::size_t>(n / 2, 2);
  Reports out;
  auto add = [&](Reports r) { out.insert(out.end(), r.begin(), r.end()); };

  add(measured_map(c, "pde-reference", n, c.tol(1e-8), VerdictPolicy::Documented,
                   [&](const ParamPoint& p) { return linear_pde_residual(p, f1); }));
  out.push_back(make_report("pde-transformed", [&] {
    std::vector<double> v = residual_map(c, n, [&](const ParamPoint& p) {
      return transformed_linear_residual(p, f1);
    });
    std::erase_if(v, [](double x) { return std::isnan(x); });
    return v;
  }(), c.tol(1e-8)));

  std::vector<double> legendre = residual_map(c, n, [&](const ParamPoint& p) {
    const RhoPartials d = rho_partials(p, f1);
    const UVJet j = uv_jet(p, f1);
    PdeResidual r;
    const double scale = std::max({std::abs(d.rho_xi), std::abs(p.xi * d.rho_xixi), 1e-300});
    r.scaled = std::abs(j.v_xi - p.xi * j.u_xi) / scale;
    return r;
  });
  out.push_back(make_report("legendre-identity", legendre, c.tol(1e-12)));

  for (CoefficientReading rd : {CoefficientReading::Xi, CoefficientReading::V}) {
    const std::string tag = to_string(rd);
    add(measured_map(c, "relation-" + tag, n, c.tol(1e-8), VerdictPolicy::Documented,
                     [&, rd](const ParamPoint& p) { return parametric_relation_residual(p, f1, rd); }));
    add(measured_map(c, "h-pde-" + tag, nh, c.tol(1e-8), VerdictPolicy::Documented,
                     [&, rd](const ParamPoint& p) { return h_pde_residual_at(p, f1, rd); }));
  }
  return out;
}

// ---------------------------------------------------------------- A7

Reports gauge_branch(const Ctx& c) {
  Reports out;
  const double c2 = c.opt.c2;
  const std::vector<GaugeF1> gauges = {{{0.0, 0.0, 1.0}}, {{1.0, 3.0, 0.0, -1.0}}, c.opt.f1};
  {
    const std::size_t n = std::max<std::size_t>(c.opt.grid, 2);
    const Grid g = real_grid(n);
    std::vector<double> diffs;
    for (double xi : g.xi) {
      for (double psi : g.psi) {
        const ParamPoint p{xi, psi, c2};
        const PdeResidual base = linear_pde_residual(p);
        for (const GaugeF1& f : gauges) {
          const PdeResidual r = linear_pde_residual(p, f);
          diffs.push_back((r.raw - base.raw) / std::max(1.0, base.raw));
        }
      }
    }
    out.push_back(make_report("gauge-independence", diffs, c.tol(1e-15)));
  }
  {
    std::mt19937_64 rng(kSeed + 7);
    std::uniform_real_distribution<double> lo(0.1, 0.75), hi(5.0, 8.0), ps(0.2, kPi - 0.2);
    std::vector<std::vector<double>> probes;
    for (int k = 0; k < 100; ++k) {
      const double xi = k % 2 == 0 ? lo(rng) : hi(rng);
      probes.push_back({xi, ps(rng)});
    }
    const GaugeF1& f1 = c.opt.f1;
    auto at = [&](std::span<const double> x) { return ParamPoint{x[0], x[1], c2}; };
    // first partials of rho, then the second partials through rho_xi
    ResidualReport first = fd_check(
        "dual-vs-fd",
        [&](std::span<const double> x) { return rho_eval(at(x), f1).rho.real(); },
        [&](std::span<const double> x) {
          const RhoPartials d = rho_partials(at(x), f1);
          return std::vector<double>{d.rho_xi.real(), d.rho_psi.real()};
        },
        probes, c.tol(1e-6));
    const ResidualReport second = fd_check(
        "dual-vs-fd-second",
        [&](std::span<const double> x) { return rho_partials(at(x), f1).rho_xi.real(); },
        [&](std::span<const double> x) {
          const RhoPartials d = rho_partials(at(x), f1);
          return std::vector<double>{d.rho_xixi.real(), d.rho_xipsi.real()};
        },
        probes, c.tol(1e-6));
    out.push_back(first);
    out.push_back(second);
  }
  {
    const auto roots = discriminant_roots();
    const std::vector<double> psis = {0.3, 0.6, 0.9, 1.2, 1.9, 2.2, 2.5, 2.8};
    constexpr double delta = 1e-9;
    for (RhoForm form : {RhoForm::Continued, RhoForm::Principal}) {
      std::vector<double> jumps;
      for (double xb : roots) {
        for (double psi : psis) {
          const Complex a = rho_eval({xb * (1.0 - delta), psi, c2}, c.opt.f1, form).rho;
          const Complex b = rho_eval({xb * (1.0 + delta), psi, c2}, c.opt.f1, form).rho;
          jumps.push_back(std::abs(a - b));
        }
      }
      const bool cont = form == RhoForm::Continued;
      out.push_back(make_report(std::string("continuity-") + to_string(form), jumps, c.tol(1e-6),
                                cont ? VerdictPolicy::Strict : VerdictPolicy::Documented));
    }
  }
  return out;
}

// ---------------------------------------------------------------- A8

Reports integrator_order(const Ctx& c) {
  const State y0 = {0.5, 0.5, 0.5};
  constexpr double span = 10.0;
  auto run = [&](double tol) {
    IntegratorConfig cfg;
    cfg.rel_tol = tol;
    cfg.abs_tol = tol;
    cfg.max_step = span;
    return integrate(cartesian_flow(), y0, 0.0, span, cfg);
  };
  const Trajectory ref = run(1e-13);
  std::vector<double> lx, ly;
  for (double tol : {1e-6, 1e-7, 1e-8, 1e-9, 1e-10, 1e-11, 1e-12}) {
    const Trajectory t = run(tol);
    const double err = std::hypot(t.back().y[0] - ref.back().y[0], t.back().y[1] - ref.back().y[1],
                                  t.back().y[2] - ref.back().y[2]);
    const double mean_step = span / double(t.meta.accepted_steps);
    lx.push_back(std::log(mean_step));
    ly.push_back(std::log(std::max(err, 1e-300)));
  }
  const double n = double(lx.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sx += lx[i];
    sy += ly[i];
    sxx += lx[i] * lx[i];
    sxy += lx[i] * ly[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  // residual = shortfall below the required slope
  ResidualReport order = make_report("integrator-order",
                                     std::vector<double>{std::max(0.0, 3.5 - slope)}, 0.0);
  order.notes.push_back("slope=" + std::to_string(slope));

  IntegratorConfig cfg;
  const Trajectory tr = integrate(cartesian_flow(), {0.0, 0.0, 10.0}, 0.0, 30.0, cfg);
  const double len = tr.path_length();
  ResidualReport path = make_report("path-length", std::vector<double>{len - 30.0}, c.tol(1e-5));
  return {order, path};
}

// ---------------------------------------------------------------- registry

struct Criterion {
  const char* id;
  const char* title;
  double budget;
  std::vector<std::string> names;
  Reports (*run)(const Ctx&);
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all = {
      {"A1", "unit-norm field", 1.0, {"unit-norm"}, unit_norm},
      {"A2", "azimuth and radius rate identities", 5.0,
       {"rate-arctan-fd", "rate-r2-fd", "rate-arctan-sphere"}, rate_identities},
      {"A3", "cartesian/spherical coherence", 10.0,
       {"pushforward-sign", "spherical-trajectory-match"}, cartesian_spherical},
      {"A4", "implicit Bessel first integral", 10.0,
       {"implicit-constant-spread", "bessel-wronskian"}, implicit_first_integral},
      {"A5", "implicit inversion consistency", 10.0, {"implicit-inversion", "implicit-vs-reduce"},
       implicit_inversion},
      {"A6", "rho PDE chain audit", 30.0,
       {"pde-reference", "pde-reference-stability", "pde-transformed", "legendre-identity",
        "relation-xi", "relation-xi-stability", "h-pde-xi", "h-pde-xi-stability", "relation-v",
        "relation-v-stability", "h-pde-v", "h-pde-v-stability"},
       pde_chain},
      {"A7", "gauge and branch properties", 5.0,
       {"gauge-independence", "dual-vs-fd", "dual-vs-fd-second", "continuity-continued",
        "continuity-principal"},
       gauge_branch},
      {"A8", "integrator order", 10.0, {"integrator-order", "path-length"}, integrator_order},
  };
  return all;
}

}  // namespace

bool CriterionResult::ok() const {
  for (const auto& r : reports) {
    if (r.verdict == Verdict::Fail) return false;
    if (r.verdict == Verdict::DocumentedDiscrepancy && !is_allowlisted(r.name)) return false;
  }
  return seconds <= budget_seconds;
}

bool VerifyOutcome::ok() const {
  return std::all_of(criteria.begin(), criteria.end(), [](const auto& c) { return c.ok(); });
}

nlohmann::json VerifyOutcome::to_json() const {
  nlohmann::json reports = nlohmann::json::array();
  nlohmann::json crit = nlohmann::json::array();
  for (const auto& c : criteria) {
    nlohmann::json names = nlohmann::json::array();
    for (const auto& r : c.reports) {
      reports.push_back(r);
      names.push_back(r.name);
    }
    crit.push_back({{"id", c.id},
                    {"title", c.title},
                    {"seconds", c.seconds},
                    {"budget_seconds", c.budget_seconds},
                    {"ok", c.ok()},
                    {"reports", names}});
  }
  return {{"reports", reports},
          {"criteria", crit},
          {"allowlist", documented_allowlist()},
          {"ok", ok()}};
}

std::vector<std::string> check_names() {
  std::vector<std::string> out;
  for (const auto& c : criteria()) out.insert(out.end(), c.names.begin(), c.names.end());
  return out;
}

const std::vector<std::string>& documented_allowlist() {
  // Measurements whose failure is a recorded finding, not a defect.
  static const std::vector<std::string> list = {"pde-reference", "relation-xi", "relation-v",
                                                "h-pde-xi", "h-pde-v", "continuity-principal"};
  return list;
}

bool is_allowlisted(const std::string& name) {
  const auto& l = documented_allowlist();
  return std::find(l.begin(), l.end(), name) != l.end();
}

VerifyOutcome run_verify(const VerifyOptions& options) {
  if (!(options.tol_scale > 0.0) || !std::isfinite(options.tol_scale)) {
    throw UsageError("verify: tolerance multiplier must be positive");
  }
  const std::vector<std::string> known = check_names();
  for (const auto& name : options.only) {
    if (std::find(known.begin(), known.end(), name) == known.end()) {
      throw UsageError("verify: unknown check '" + name + "'");
    }
  }
  const Ctx ctx{options};
  VerifyOutcome out;
  for (const auto& c : criteria()) {
    const bool wanted =
        options.only.empty() || std::any_of(c.names.begin(), c.names.end(), [&](const auto& n) {
          return std::find(options.only.begin(), options.only.end(), n) != options.only.end();
        });
    if (!wanted) continue;
    CriterionResult res;
    res.id = c.id;
    res.title = c.title;
    res.budget_seconds = c.budget;
    const auto t0 = std::chrono::steady_clock::now();
    Reports reps;
    try {
      reps = c.run(ctx);
    } catch (const Error& e) {
      ResidualReport failed;
      failed.name = c.names.front();
      failed.verdict = Verdict::Fail;
      failed.notes.push_back(std::string("aborted: ") + e.what());
      reps.push_back(failed);
    }
    res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (auto& r : reps) {
      if (options.only.empty() ||
          std::find(options.only.begin(), options.only.end(), r.name) != options.only.end()) {
        res.reports.push_back(std::move(r));
      }
    }
    out.criteria.push_back(std::move(res));
  }
  return out;
}

}  // namespace hopf_flow
