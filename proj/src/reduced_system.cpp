#include "hopf_flow/reduced_system.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>
#include <numeric>

#include "hopf_flow/error.hpp"
#include "hopf_flow/fields.hpp"
#include "hopf_flow/flows.hpp"
#include "hopf_flow/roots.hpp"
#include "hopf_flow/special_functions.hpp"

namespace hopf_flow {

namespace {

constexpr double kHalfPi = 0.5 * std::numbers::pi;

// Below this Bessel argument the relation is dominated by the logarithmic
// divergence of K0 and a sample carries no usable information on C1.
constexpr double kMinImplicitArgument = 1e-8;

double scaled_sum(std::initializer_list<double> terms) {
  double sum = 0.0, big = 0.0;
  for (double t : terms) {
    sum += t;
    big = std::max(big, std::abs(t));
  }
  return big == 0.0 ? 0.0 : std::abs(sum) / big;
}

struct ImplicitTerms {
  double a, b;
  BesselQuad q;
};

ImplicitTerms implicit_terms(double r, double H) {
  if (!(r > 0.0) || !(H > 0.0) || !(H <= 1.0)) {
    throw DomainError("implicit relation: need r > 0 and H in (0, 1]");
  }
  const double sq = std::sqrt(H);
  const double z = 0.5 * sq * r;
  if (z < kMinImplicitArgument) {
    throw DegenerateSampleError("implicit relation: K0 diverges as sqrt(H) r -> 0");
  }
  return {4.0 + r * r, 8.0 * sq * r, bessel_quad(z)};
}

// The real relation in H whose root solve_implicit looks for.
double implicit_function(double effective, ImplicitForm form, double r, double H) {
  const ImplicitTerms t = implicit_terms(r, H);
  const double k_sign = form == ImplicitForm::ContinuedK ? 1.0 : -1.0;
  return effective * (t.a * t.q.i0 - t.b * t.q.i1) + t.a * t.q.k0 + k_sign * t.b * t.q.k1;
}

// first derivative on a nonuniform grid from the quadratic through 3 points
// Derivative at x[m] of the Lagrange interpolant through (x[k], y[k]),
// k < n (Fornberg's weights, any spacing).
double lagrange_slope(const double* x, const double* y, std::size_t n, std::size_t m) {
  double slope = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double w = 0.0;
    if (j == m) {
      for (std::size_t k = 0; k < n; ++k) {
        if (k != m) w += 1.0 / (x[m] - x[k]);
      }
    } else {
      w = 1.0 / (x[j] - x[m]);
      for (std::size_t k = 0; k < n; ++k) {
        if (k != j && k != m) w *= (x[m] - x[k]) / (x[j] - x[k]);
      }
    }
    slope += w * y[j];
  }
  return slope;
}

}  // namespace

double ReducedState::psi() const {
  const double base = std::asin(std::sqrt(std::clamp(H, 0.0, 1.0)));
  return branch == Hemisphere::Upper ? base : std::numbers::pi - base;
}

ReducedState ReducedState::from_psi(double r, double psi) {
  const double s = std::sin(psi);
  return {r, s * s, psi <= kHalfPi ? Hemisphere::Upper : Hemisphere::Lower};
}

double psi_rhs(double r, double psi) {
  if (!(r > 0.0)) throw DomainError("psi_rhs: r must be positive");
  const double r2 = r * r;
  const double cs = std::cos(psi);
  const double sn = std::sin(psi);
  const double fold = r2 * r2 - 56.0 * r2 + 64.0 * r2 * cs * cs + 16.0;
  const double scaled = std::abs(cs) * std::abs(fold) / (r2 * r2 + 8.0 * r2 + 16.0);
  if (scaled < kTurningEpsilon) {
    throw TurningPointError("psi_rhs: coefficient of dpsi/dr vanishes", cs * fold);
  }
  return -sn * (r2 * r2 - 24.0 * r2 + 64.0 * r2 * cs * cs + 16.0) / (r * cs * fold);
}

double h_turning_coefficient(double r, double H) {
  const double r3 = r * r * r;
  const double r5 = r3 * r * r;
  return (r5 + 8.0 * r3 - 64.0 * r3 * H + 16.0 * r) / (r5 + 8.0 * r3 + 16.0 * r);
}

double h_rhs(double r, double H) {
  if (!(r > 0.0)) throw DomainError("h_rhs: r must be positive");
  const double coef_scaled = h_turning_coefficient(r, H);
  if (std::abs(coef_scaled) < kTurningEpsilon) {
    throw TurningPointError("h_rhs: coefficient of dH/dr vanishes", coef_scaled);
  }
  const double r2 = r * r;
  const double r3 = r2 * r;
  const double coef = r3 * r2 + 8.0 * r3 - 64.0 * r3 * H + 16.0 * r;
  return -(2.0 * H * r2 * r2 + 80.0 * H * r2 - 128.0 * H * H * r2 + 32.0 * H) / coef;
}

double h_equation_residual(double r, double H, double dHdr) {
  const double r2 = r * r;
  const double r3 = r2 * r;
  return scaled_sum({r3 * r2 * dHdr, 8.0 * r3 * dHdr, -64.0 * r3 * H * dHdr, 16.0 * r * dHdr,
                     2.0 * H * r2 * r2, 80.0 * H * r2, -128.0 * H * H * r2, 32.0 * H});
}

SubstitutionReport substitution_check(std::span<const double> r, std::span<const double> psi) {
  if (r.size() != psi.size()) throw DomainError("substitution_check: size mismatch");
  SubstitutionReport rep;
  std::size_t begin = 0;
  auto flush = [&](std::size_t b, std::size_t e) {
    if (e - b < 3) return;
    ++rep.segments;
    const std::size_t width = std::min<std::size_t>(5, e - b);
    std::vector<double> H(e - b);
    for (std::size_t i = b; i < e; ++i) H[i - b] = std::sin(psi[i]) * std::sin(psi[i]);
    for (std::size_t i = b; i < e; ++i) {
      // centred 5-point stencil, shifted inward at the segment ends
      const std::size_t lo = std::clamp(i, b + width / 2, e - (width - width / 2)) - width / 2;
      const double slope = lagrange_slope(&r[lo], &H[lo - b], width, i - lo);
      rep.max_residual = std::max(rep.max_residual, h_equation_residual(r[i], H[i - b], slope));
      ++rep.samples;
    }
  };
  for (std::size_t i = 1; i <= r.size(); ++i) {
    if (i == r.size() || (psi[i] > kHalfPi) != (psi[i - 1] > kHalfPi)) {
      flush(begin, i);
      begin = i;
    }
  }
  return rep;
}

const char* to_string(ImplicitForm f) {
  return f == ImplicitForm::ContinuedK ? "continued_k" : "real_k";
}

ImplicitConstant implicit_constant(double r, double H, ImplicitForm form) {
  const ImplicitTerms t = implicit_terms(r, H);
  const double den = t.a * t.q.i0 - t.b * t.q.i1;
  if (std::abs(den) < 1e-300) {
    throw DegenerateSampleError("implicit_constant: I-combination vanishes");
  }
  ImplicitConstant c;
  c.form = form;
  c.r = r;
  c.H = H;
  if (form == ImplicitForm::ContinuedK) {
    c.c1 = -(t.a * t.q.continued_k0 - t.b * t.q.continued_k1) / den;
    c.effective = -(t.a * t.q.k0 + t.b * t.q.k1) / den;
  } else {
    c.effective = -(t.a * t.q.k0 - t.b * t.q.k1) / den;
    c.c1 = c.effective;
  }
  if (!std::isfinite(c.effective)) throw DegenerateSampleError("implicit_constant: overflow");
  return c;
}

double implicit_residual(const ImplicitConstant& c, double r, double H) {
  const ImplicitTerms t = implicit_terms(r, H);
  const double k_sign = c.form == ImplicitForm::ContinuedK ? 1.0 : -1.0;
  return scaled_sum({c.effective * t.a * t.q.i0, -c.effective * t.b * t.q.i1, t.a * t.q.k0,
                     k_sign * t.b * t.q.k1});
}

ImplicitRoot solve_implicit(const ImplicitConstant& c, double r, double H_lo, double H_hi) {
  if (!(H_lo < H_hi)) throw DomainError("solve_implicit: empty bracket");
  if (!(H_lo > 0.0) || !(H_hi <= 1.0)) throw DomainError("solve_implicit: bracket must lie in (0, 1]");
  auto f = [&](double H) { return implicit_function(c.effective, c.form, r, H); };
  const auto cells = scan_sign_changes(f, H_lo, H_hi, 64);
  if (cells.empty()) throw NoRootError("solve_implicit: no sign change on the bracket");
  const double mid = 0.5 * (H_lo + H_hi);
  auto best = std::min_element(cells.begin(), cells.end(), [mid](const auto& a, const auto& b) {
    return std::abs(0.5 * (a.first + a.second) - mid) < std::abs(0.5 * (b.first + b.second) - mid);
  });
  ImplicitRoot out;
  out.H = best->first == best->second ? best->first : brent_root(f, best->first, best->second, 1e-16).x;
  out.residual = implicit_residual(c, r, out.H);
  out.roots_in_bracket = static_cast<int>(cells.size());
  out.multiplicity_warning = cells.size() > 1;
  return out;
}

double implicit_spread(std::span<const double> r, std::span<const double> H, ImplicitForm form) {
  if (r.size() != H.size() || r.size() < 2) throw DomainError("implicit_spread: need >= 2 samples");
  std::vector<double> cs;
  cs.reserve(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) cs.push_back(implicit_constant(r[i], H[i], form).effective);
  const double mean = std::accumulate(cs.begin(), cs.end(), 0.0) / cs.size();
  double var = 0.0;
  for (double v : cs) var += (v - mean) * (v - mean);
  const double sd = std::sqrt(var / cs.size());
  return mean == 0.0 ? sd : sd / std::abs(mean);
}

FormSelection select_implicit_form(std::span<const double> r, std::span<const double> H) {
  FormSelection sel;
  sel.continued_spread = implicit_spread(r, H, ImplicitForm::ContinuedK);
  sel.real_spread = implicit_spread(r, H, ImplicitForm::RealK);
  sel.form = sel.continued_spread <= sel.real_spread ? ImplicitForm::ContinuedK : ImplicitForm::RealK;
  return sel;
}

Trajectory integrate_h(double r0, double H0, double r1, IntegratorConfig cfg) {
  if (!(r0 > 0.0) || !(r1 > 0.0)) throw DomainError("integrate_h: r must stay positive");
  if (!(H0 >= 0.0 && H0 <= 1.0)) throw DomainError("integrate_h: H0 must lie in [0, 1]");
  cfg.events.push_back({"turning",
                        [](double r, std::span<const double> y) {
                          return std::abs(h_turning_coefficient(r, y[0])) - kTurningEventLevel;
                        },
                        EventDirection::Falling});
  cfg.events.push_back({"equator", [](double, std::span<const double> y) { return y[0] - 1.0; },
                        EventDirection::Rising});
  cfg.events.push_back({"axis", [](double, std::span<const double> y) { return y[0]; },
                        EventDirection::Falling});
  return integrate_scalar(h_rhs, r0, H0, r1, cfg);
}

namespace {

// (r, psi) part of the spherical system in flow time.
void radial_polar_field(double, std::span<const double> y, std::span<double> dy) {
  const SphericalVelocity v = eval_spherical({y[0], 0.0, y[1], false});
  dy[0] = v.dr;
  dy[1] = v.dpsi;
}

constexpr double kSwitchIn = 2e-2;    // leave r-parametrization below this
constexpr double kSwitchOut = 5e-2;   // resume r-parametrization above this

double fold_distance(double r, double H) {
  return std::min(std::abs(h_turning_coefficient(r, H)), std::abs(1.0 - H) * 4.0);
}

}  // namespace

ReducedCurve trace_reduced_curve(const ReducedState& start, double r_target, double r_min,
                                 double r_max, int max_turns, IntegratorConfig cfg) {
  if (!(r_min > 0.0 && r_min < r_max)) throw DomainError("trace_reduced_curve: need 0 < r_min < r_max");
  if (start.r < r_min || start.r > r_max) throw DomainError("trace_reduced_curve: r0 outside bounds");
  ReducedCurve curve;
  double r = start.r;
  double H = start.H;
  Hemisphere branch = start.branch;
  double dir = r_target >= r ? 1.0 : -1.0;
  bool first = true;

  auto record = [&](double rr, double hh, Hemisphere br, bool arc) {
    ReducedState s{rr, hh, br};
    curve.points.push_back({rr, hh, s.psi(), arc});
  };

  while (true) {
    // r-parametrized segment
    const double goal = first ? std::clamp(r_target, r_min, r_max) : (dir > 0 ? r_max : r_min);
    first = false;
    IntegratorConfig seg = cfg;
    seg.events.push_back({"near_fold",
                          [](double rr, std::span<const double> y) { return fold_distance(rr, y[0]) - kSwitchIn; },
                          EventDirection::Falling});
    seg.events.push_back({"axis", [](double, std::span<const double> y) { return y[0] - 1e-16; },
                          EventDirection::Falling});
    Trajectory tr;
    if (fold_distance(r, H) > kSwitchIn) {
      tr = integrate_scalar(h_rhs, r, H, goal, seg);
      for (const auto& s : tr.samples) {
        if (!curve.points.empty() && s.t == curve.points.back().r && !curve.points.back().arclength_segment) continue;
        record(s.t, s.y[0], branch, false);
      }
      r = tr.back().t;
      H = tr.back().y[0];
      if (tr.meta.stop_reason == StopReason::ReachedEnd) {
        curve.stop = "reached_r";
        return curve;
      }
      if (tr.meta.event_name != "near_fold") {
        curve.stop = tr.meta.stop_reason == StopReason::StepUnderflow ? "step_underflow" : tr.meta.event_name;
        return curve;
      }
    }
    if (curve.turning_points >= max_turns) {
      curve.stop = "max_turns";
      return curve;
    }

    // arclength segment through the fold
    ReducedState rs{r, H, branch};
    const double psi0 = rs.psi();
    const SphericalVelocity v0 = eval_spherical({r, 0.0, psi0, false});
    const double tdir = (v0.dr * dir) >= 0.0 ? 1.0 : -1.0;
    IntegratorConfig arc = cfg;
    arc.events.push_back({"clear_of_fold",
                          [](double, std::span<const double> y) {
                            const double s = std::sin(y[1]);
                            return fold_distance(y[0], s * s) - kSwitchOut;
                          },
                          EventDirection::Rising});
    arc.events.push_back({"r_min", [r_min](double, std::span<const double> y) { return y[0] - r_min; },
                          EventDirection::Falling});
    arc.events.push_back({"r_max", [r_max](double, std::span<const double> y) { return y[0] - r_max; },
                          EventDirection::Rising});
    arc.events.push_back({"axis", [](double, std::span<const double> y) { return std::abs(std::sin(y[1])) - kGuardSinPsi; },
                          EventDirection::Falling});
    const Trajectory at = integrate(radial_polar_field, State{r, psi0}, 0.0, tdir * 200.0, arc);
    for (std::size_t k = 1; k < at.size(); ++k) {
      const double sn = std::sin(at.samples[k].y[1]);
      const ReducedState p = ReducedState::from_psi(at.samples[k].y[0], at.samples[k].y[1]);
      curve.points.push_back({p.r, sn * sn, at.samples[k].y[1], true});
    }
    if (at.meta.stop_reason != StopReason::HitEvent || at.meta.event_name != "clear_of_fold") {
      curve.stop = at.meta.stop_reason == StopReason::HitEvent ? at.meta.event_name : "no_exit_from_fold";
      return curve;
    }
    const double r_new = at.back().y[0];
    const double psi_new = at.back().y[1];
    const SphericalVelocity v1 = eval_spherical({r_new, 0.0, psi_new, false});
    const double new_dir = (v1.dr * tdir) >= 0.0 ? 1.0 : -1.0;
    if (new_dir != dir) ++curve.turning_points;
    dir = new_dir;
    const ReducedState ns = ReducedState::from_psi(r_new, psi_new);
    r = ns.r;
    H = ns.H;
    branch = ns.branch;
  }
}

}  // namespace hopf_flow
