#pragma once

#include <array>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "hopf_flow/fields.hpp"

namespace hopf_flow {

using Complex = std::complex<double>;

/// Point of the parametric plane. xi stands in for r as the parameter of the
/// (u, v) construction; c2 is the slope of the phi-part of the first integral.
struct ParamPoint {
  double xi = 0.0;
  double psi = 0.0;
  double c2 = 0.0;

  double chi() const;  // tan(psi / 2)
};

/// Arbitrary function F1(xi) added to rho, as a polynomial sum_k coeffs[k] xi^k.
struct GaugeF1 {
  std::vector<double> coeffs;

  double value(double xi) const;
  double derivative(double xi) const;
};

/// How the closed form for rho is evaluated.
///  - Principal: literally, in complex arithmetic on principal branches.
///  - Continued: arctan(X/S)/S replaced by -arctan(S/X)/S continued in S^2
///    (a real artanh form for S^2 < 0), and log L by log|L|. Differs from
///    Principal by a term constant in psi on either side of Principal's
///    arctan pole (X = 0), and stays continuous across the discriminant
///    boundary, where Principal diverges like 1/S.
enum class RhoForm { Principal, Continued };

/// Which variable the coefficients of the (u, v) relation are written in.
enum class CoefficientReading { Xi, V };

const char* to_string(RhoForm f);
const char* to_string(CoefficientReading r);

/// 16 xi^2 - 24 xi^4 + xi^6; rho is real-valued (Principal) where it is > 0.
double rho_discriminant(double xi);
bool in_real_region(double xi);
/// The two boundaries sqrt(12 - sqrt(128)) and sqrt(12 + sqrt(128)).
std::array<double, 2> discriminant_roots();

struct RhoValue {
  Complex rho;
  Complex rho_xi;
  bool real_region = false;
  bool arctan_on_cut = false;  // Principal form only
};

struct RhoPartials {
  Complex rho;
  Complex rho_xi;
  Complex rho_psi;
  Complex rho_xixi;
  Complex rho_xipsi;
  bool real_region = false;
  bool arctan_on_cut = false;
};

/// Throws DomainError unless xi > 0 and psi in (0, pi) away from the ends.
RhoValue rho_eval(const ParamPoint& p, const GaugeF1& f1 = {}, RhoForm form = RhoForm::Principal);
RhoPartials rho_partials(const ParamPoint& p, const GaugeF1& f1 = {},
                         RhoForm form = RhoForm::Principal);

/// Scaled residual plus the raw (unscaled) value and an optional flag.
struct PdeResidual {
  double scaled = 0.0;
  double raw = 0.0;
  bool flagged = false;
  std::string flag;
};

/// Linear PDE for rho in its reference form:
///   (sin xi^4 - 8 sin xi^2 + 16 xi^2 sin3psi + 16 sin) rho_psi
///   + xi^6 cos - 8 xi^4 cos + 16 xi^4 cos3psi + 16 xi^2 cos - 8 c2 xi^3 + 32 c2 xi.
/// Flags "indeterminate" when the rho_psi coefficient is below 1e-12.
PdeResidual linear_pde_residual(const ParamPoint& p, const GaugeF1& f1 = {},
                                RhoForm form = RhoForm::Principal);

/// The linear PDE that the (u, v) relation with xi-coefficients reduces to
/// after u = rho_xi, v = xi rho_xi - rho (divided by rho_xixi):
///   -(coef) rho_psi + xi^5 cos - 8 xi^3 cos + 16 xi^3 cos3psi + 16 xi cos
///   + c2 (-8 xi^4 + 32 xi^2).
PdeResidual transformed_linear_residual(const ParamPoint& p, const GaugeF1& f1 = {},
                                        RhoForm form = RhoForm::Principal);

struct UVPair {
  Complex u;  // plays H
  Complex v;  // plays r
  double max_imag = 0.0;
};

UVPair uv_from_rho(const ParamPoint& p, const GaugeF1& f1 = {}, RhoForm form = RhoForm::Principal);

/// u, v and their first partials. v_xi is formed literally as
/// d(xi rho_xi)/dxi - rho_xi, so that v_xi = xi u_xi is a real check.
struct UVJet {
  Complex u, v;
  Complex u_xi, u_psi;
  Complex v_xi, v_psi;
};

UVJet uv_jet(const ParamPoint& p, const GaugeF1& f1 = {}, RhoForm form = RhoForm::Principal);

/// The (u, v) relation with the coefficients in xi (reference reading) or in v.
PdeResidual parametric_relation_residual(const ParamPoint& p, const GaugeF1& f1 = {},
                                         CoefficientReading reading = CoefficientReading::Xi,
                                         RhoForm form = RhoForm::Principal);

struct Reconstruction {
  double xi = 0.0;
  double H = 0.0;
  int roots_in_bracket = 0;
};

/// Solves v(xi, psi) = r for xi in [xi_lo, xi_hi] and returns H = u(xi*, psi).
/// Throws NoRootError without a sign change and RegionError where v is
/// complex-valued inside the bracket.
Reconstruction reconstruct_H(double r, double psi, double c2, double xi_lo, double xi_hi,
                             const GaugeF1& f1 = {}, RhoForm form = RhoForm::Principal);

/// Partials of H(r, psi) from the parametric rules
///   H_r = u_xi / v_xi,  H_psi = u_psi - v_psi u_xi / v_xi.
struct HPartials {
  Complex H_r;
  Complex H_psi;
  bool singular = false;  // v_xi ~ 0
};

HPartials parametric_h_partials(const UVJet& jet);

/// Coefficients of H_r, H_psi and c2 in the H(r, psi) equation at (R, psi).
struct HEquationCoefficients {
  Complex of_H_r;
  Complex of_H_psi;
  Complex of_c2;
};

HEquationCoefficients h_equation_coefficients(Complex R, double psi);

/// H(r, psi) equation residual at a parametric point, with the coefficient
/// variable taken as v (the true r) or xi.
PdeResidual h_pde_residual_at(const ParamPoint& p, const GaugeF1& f1 = {},
                              CoefficientReading reading = CoefficientReading::V,
                              RhoForm form = RhoForm::Principal);

/// Same, at a physical point (r, psi) reconstructed from an xi-bracket.
PdeResidual h_pde_residual(double r, double psi, double c2, double xi_lo, double xi_hi,
                           const GaugeF1& f1 = {},
                           CoefficientReading reading = CoefficientReading::V,
                           RhoForm form = RhoForm::Principal);

/// Directional derivative of Phi = c2 phi + H(r, psi) along the spherical
/// field, in the r (r^2+4)^2-scaled coefficient form.
PdeResidual phi_flow_derivative(const SphericalState& s, double c2, double xi_lo, double xi_hi,
                                const GaugeF1& f1 = {}, RhoForm form = RhoForm::Principal);

/// Phi = c2 phi + H(r, psi) itself.
double phi_value(const SphericalState& s, double c2, double xi_lo, double xi_hi,
                 const GaugeF1& f1 = {}, RhoForm form = RhoForm::Principal);

/// Gradient (E_r, E_phi, E_xi) of a test function E(r, phi, xi).
using TestGradient = std::function<std::array<double, 3>(double r, double phi, double xi)>;

struct SubstitutionMismatch {
  double mismatch = 0.0;  // |Eq_xi - Eq_psi| / largest term
  bool branch_warning = false;
};

/// Evaluates the first-integral PDE in (r, phi, xi = sin psi) with
/// cos psi = sqrt(1 - xi^2) on E, and in (r, phi, psi) on Phi(r, phi, psi) =
/// E(r, phi, sin psi); returns their scaled difference. For psi > pi/2 the
/// square root picks the wrong sign and branch_warning is set.
SubstitutionMismatch xi_substitution_residual(double r, double phi, double psi, const TestGradient& E);

}  // namespace hopf_flow
