#pragma once

#include <complex>
#include <span>
#include <string>
#include <vector>

#include "hopf_flow/integrator.hpp"

namespace hopf_flow {

/// Absolute threshold on the scaled H' coefficient
/// (r^5 + 8r^3 - 64r^3 H + 16r) / (r^5 + 8r^3 + 16r).
inline constexpr double kTurningEpsilon = 1e-8;
/// integrate_h stops (event "turning") once the scaled coefficient falls
/// below this; near a fold it behaves like sqrt(r_fold - r), so smaller
/// levels are out of reach of the step-size floor.
inline constexpr double kTurningEventLevel = 1e-4;

/// Which half of [0, pi] psi lies in; H = sin^2(psi) cannot tell them apart.
enum class Hemisphere { Upper, Lower };  // Upper: psi <= pi/2

struct ReducedState {
  double r = 0.0;
  double H = 0.0;
  Hemisphere branch = Hemisphere::Upper;

  double psi() const;
  static ReducedState from_psi(double r, double psi);
};

/// dpsi/dr from the psi(r) equation. Throws TurningPointError near cos(psi) = 0
/// or near the fold r^4 - 56r^2 + 64r^2 cos^2(psi) + 16 = 0.
double psi_rhs(double r, double psi);

/// dH/dr from the H(r) equation. Throws TurningPointError when the scaled
/// H' coefficient drops below kTurningEpsilon, and DomainError for r <= 0.
double h_rhs(double r, double H);

/// Scaled H' coefficient; zero on the turning locus H = (r^2+4)^2 / (64 r^2).
double h_turning_coefficient(double r, double H);

/// Residual of the H(r) equation for a given slope, scaled by its largest term.
double h_equation_residual(double r, double H, double dHdr);

struct SubstitutionReport {
  double max_residual = 0.0;
  std::size_t samples = 0;
  std::size_t segments = 0;
};

/// Maps a sampled psi(r) curve to H = sin^2(psi), differentiates H with a
/// 5-point Lagrange stencil (any spacing) and returns the largest scaled residual of the H equation.
/// The curve is split wherever psi crosses pi/2; segments need >= 3 samples.
SubstitutionReport substitution_check(std::span<const double> r, std::span<const double> psi);

/// How BesselK at the negative argument of the implicit relation is read.
enum class ImplicitForm {
  ContinuedK,  ///< K(-z) via the arg = pi continuation; real part is aK0 + bK1
  RealK,       ///< K taken at +z verbatim: aK0 - bK1
};

const char* to_string(ImplicitForm f);

/// Constant C1 of the implicit relation
///   C1 [a I0(z) - b I1(z)] + a K0(-z) - b K1(-z) = 0,
/// with a = 4 + r^2, b = 8 sqrt(H) r, z = sqrt(H) r / 2.
/// Under ContinuedK, c1 = effective + i*pi; `effective` is the real constant
/// that solve_implicit uses.
struct ImplicitConstant {
  std::complex<double> c1;
  double effective = 0.0;
  ImplicitForm form = ImplicitForm::ContinuedK;
  double r = 0.0;  // sample the constant was extracted from
  double H = 0.0;
};

ImplicitConstant implicit_constant(double r, double H, ImplicitForm form = ImplicitForm::ContinuedK);

/// Effective real relation C [a I0 - b I1] + (a K0 +/- b K1), scaled by its
/// largest term.
double implicit_residual(const ImplicitConstant& c, double r, double H);

struct ImplicitRoot {
  double H = 0.0;
  double residual = 0.0;
  int roots_in_bracket = 0;
  bool multiplicity_warning = false;
};

/// Root of the implicit relation in H on [H_lo, H_hi] (bisection with secant
/// acceleration). Scans the bracket for extra sign changes; with several, the
/// root nearest the midpoint is returned with a warning. Throws NoRootError.
ImplicitRoot solve_implicit(const ImplicitConstant& c, double r, double H_lo, double H_hi);

struct FormSelection {
  ImplicitForm form = ImplicitForm::ContinuedK;
  double continued_spread = 0.0;
  double real_spread = 0.0;
};

/// Relative spread stddev(C) / |mean(C)| of the effective constant over samples.
double implicit_spread(std::span<const double> r, std::span<const double> H, ImplicitForm form);

/// Picks the form whose constant stays flattest along a sampled H(r) solution.
FormSelection select_implicit_form(std::span<const double> r, std::span<const double> H);

/// Integrates the H(r) equation from (r0, H0) toward r1 with events on the
/// turning locus ("turning"), H reaching 1 ("equator") and H reaching 0.
Trajectory integrate_h(double r0, double H0, double r1, IntegratorConfig cfg = {});

/// One point of a reduced curve that may fold. `param` is r on r-segments and
/// flow time on arclength segments.
struct ReducedCurvePoint {
  double r = 0.0;
  double H = 0.0;
  double psi = 0.0;
  bool arclength_segment = false;
};

struct ReducedCurve {
  std::vector<ReducedCurvePoint> points;
  int turning_points = 0;
  std::string stop;
};

/// Follows the H(r) solution through (r0, H0, branch), switching to the
/// (r, psi) pair of the spherical system in flow time across turning points
/// and resuming in r afterwards. Stops when r leaves [r_min, r_max], after
/// `max_turns` folds, or at a coordinate singularity.
ReducedCurve trace_reduced_curve(const ReducedState& start, double r_target, double r_min,
                                 double r_max, int max_turns = 8, IntegratorConfig cfg = {});

}  // namespace hopf_flow
