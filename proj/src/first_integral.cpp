#include "hopf_flow/first_integral.hpp"

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <numbers>

#include "hopf_flow/error.hpp"
#include "hopf_flow/hyper_dual.hpp"
#include "hopf_flow/roots.hpp"

namespace hopf_flow {

namespace {

using RD = HyperDual<double>;
using CD = HyperDual<Complex>;

constexpr double kMinSinPsi = 1e-12;

double scaled(std::initializer_list<Complex> terms, Complex* raw = nullptr) {
  Complex sum = 0.0;
  double big = 0.0;
  for (const Complex& t : terms) {
    sum += t;
    big = std::max(big, std::abs(t));
  }
  if (raw) *raw = sum;
  return big == 0.0 ? 0.0 : std::abs(sum) / big;
}

void check_point(const ParamPoint& p) {
  if (!std::isfinite(p.xi) || !std::isfinite(p.psi) || !std::isfinite(p.c2)) {
    throw DomainError("ParamPoint: non-finite input");
  }
  if (!(p.xi > 0.0)) throw DomainError("ParamPoint: xi must be positive");
  if (!(p.psi > 0.0 && p.psi < std::numbers::pi) || std::sin(p.psi) < kMinSinPsi) {
    throw DomainError("ParamPoint: psi must lie in (0, pi); ln(chi) degenerates at the ends");
  }
}

RD gauge(const GaugeF1& f1, const RD& xi) {
  RD out(0.0);
  for (auto it = f1.coeffs.rbegin(); it != f1.coeffs.rend(); ++it) out = out * xi + RD(*it);
  return out;
}

// arctan(S/X)/S as an even function of S, continued to q = S^2 < 0 by the
// real form artanh(s/X)/s = ln|(X+s)/(X-s)| / (2s), s = sqrt(-q).
RD even_arctan_ratio(const RD& q, const RD& X) {
  if (std::abs(q.a) <= 1e-6 * X.a * X.a) {
    const RD inv = RD(1.0) / X;
    const RD w = q * inv * inv;
    return inv * (RD(1.0) - (1.0 / 3.0) * w + (1.0 / 5.0) * w * w - (1.0 / 7.0) * w * w * w);
  }
  if (q.a > 0.0) {
    const RD s = sqrt(q);
    if (X.a == 0.0) return RD(0.5 * std::numbers::pi) / s;
    return atan(s / X) / s;
  }
  const RD s = sqrt(-q);
  return log_abs((X + s) / (X - s)) / (2.0 * s);
}

struct RhoJet {
  CD rho;
  bool arctan_on_cut = false;
};

// rho with xi and psi seeded by the caller.
RhoJet rho_core(const RD& xi, const RD& psi, double c2, const GaugeF1& f1, RhoForm form) {
  const RD xi2 = xi * xi;
  const RD xi3 = xi2 * xi;
  const RD xi4 = xi2 * xi2;
  const RD xi5 = xi4 * xi;
  const RD xi6 = xi4 * xi2;
  const RD chi = tan(0.5 * psi);
  const RD chi2 = chi * chi;
  const RD D = RD(16.0) + 40.0 * xi2 + xi4;
  // ln tan(psi/2) = -atanh(cos psi), accurate near psi = pi/2
  const double sp = std::sin(psi.a), cp = std::cos(psi.a);
  const RD L = chain(psi, -std::atanh(cp), 1.0 / sp, -cp / (sp * sp));
  const RD log_chi2p1 = log(RD(1.0) + chi2);
  const RD chi4 = chi2 * chi2;
  const RD big = xi4 * chi4 + 2.0 * xi4 * chi2 + xi4 + 40.0 * xi2 * chi4 - 176.0 * xi2 * chi2 +
                 40.0 * xi2 + 16.0 * chi4 + 32.0 * chi2 + RD(16.0);
  // X / 32 of the arctan argument X / (32 S)
  const RD X = (2.0 * chi2 * D + RD(32.0) - 176.0 * xi2 + 2.0 * xi4) / RD(32.0);
  const RD q = 16.0 * xi2 - 24.0 * xi4 + xi6;

  const RD log_terms = (xi5 * L + 8.0 * xi3 * L + 16.0 * xi * L - 8.0 * c2 * xi4 * L +
                        32.0 * c2 * xi2 * L) / D -
                       xi * log_chi2p1 + gauge(f1, xi);
  const RD c2_weight = c2 * (-64.0 * xi6 + 256.0 * xi4) / D;

  RhoJet out;
  if (form == RhoForm::Continued) {
    const RD rho = log_terms + 16.0 * xi3 * log_abs(big) / D - c2_weight * even_arctan_ratio(q, X);
    out.rho = to_complex(rho);
    return out;
  }

  CD qc = to_complex(q);
  qc.a = Complex(q.a, 0.0);  // +0 imaginary part: sqrt(-|q|) = +i sqrt|q|
  const CD S = sqrt(qc);
  CD w = to_complex(X) / S;
  if (q.a < 0.0) {
    w.a = Complex(0.0, w.a.imag());
    out.arctan_on_cut = std::abs(w.a.imag()) > 1.0;
  }
  CD big_c = to_complex(big);
  big_c.a = Complex(big.a, 0.0);
  out.rho = to_complex(log_terms) + 16.0 * to_complex(xi3) * log(big_c) / to_complex(D) +
            to_complex(c2_weight) * atan(w) / S;
  return out;
}

RhoJet seeded(const ParamPoint& p, const GaugeF1& f1, RhoForm form, bool xi_e1, bool xi_e2,
              bool psi_e2) {
  const RD xi = RD::variable(p.xi, xi_e1, xi_e2);
  const RD psi = RD::variable(p.psi, false, psi_e2);
  return rho_core(xi, psi, p.c2, f1, form);
}

}  // namespace

double ParamPoint::chi() const { return std::tan(0.5 * psi); }

double GaugeF1::value(double xi) const {
  double out = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) out = out * xi + *it;
  return out;
}

double GaugeF1::derivative(double xi) const {
  double out = 0.0;
  for (std::size_t k = coeffs.size(); k-- > 1;) out = out * xi + static_cast<double>(k) * coeffs[k];
  return out;
}

const char* to_string(RhoForm f) { return f == RhoForm::Principal ? "principal" : "continued"; }

const char* to_string(CoefficientReading r) { return r == CoefficientReading::Xi ? "xi" : "v"; }

double rho_discriminant(double xi) {
  const double x2 = xi * xi;
  return x2 * (16.0 - 24.0 * x2 + x2 * x2);
}

bool in_real_region(double xi) { return rho_discriminant(xi) > 0.0; }

std::array<double, 2> discriminant_roots() {
  const double s = std::sqrt(128.0);
  return {std::sqrt(12.0 - s), std::sqrt(12.0 + s)};
}

RhoValue rho_eval(const ParamPoint& p, const GaugeF1& f1, RhoForm form) {
  check_point(p);
  const RhoJet j = seeded(p, f1, form, true, false, false);
  return {j.rho.a, j.rho.b, in_real_region(p.xi), j.arctan_on_cut};
}

RhoPartials rho_partials(const ParamPoint& p, const GaugeF1& f1, RhoForm form) {
  check_point(p);
  const RhoJet xx = seeded(p, f1, form, true, true, false);
  const RhoJet xp = seeded(p, f1, form, true, false, true);
  RhoPartials out;
  out.rho = xp.rho.a;
  out.rho_xi = xp.rho.b;
  out.rho_psi = xp.rho.c;
  out.rho_xipsi = xp.rho.d;
  out.rho_xixi = xx.rho.d;
  out.real_region = in_real_region(p.xi);
  out.arctan_on_cut = xp.arctan_on_cut;
  return out;
}

PdeResidual linear_pde_residual(const ParamPoint& p, const GaugeF1& f1, RhoForm form) {
  check_point(p);
  // psi-only seed: F1 contributes nothing to rho_psi
  const RhoJet j = seeded(p, f1, form, false, false, true);
  const Complex rho_psi = j.rho.c;
  const double xi = p.xi, c2 = p.c2;
  const double x2 = xi * xi, x4 = x2 * x2, x6 = x4 * x2;
  const double s = std::sin(p.psi), c = std::cos(p.psi);
  const double s3 = std::sin(3.0 * p.psi), c3 = std::cos(3.0 * p.psi);
  const double coef = s * x4 - 8.0 * s * x2 + 16.0 * x2 * s3 + 16.0 * s;
  PdeResidual out;
  Complex raw;
  out.scaled = scaled({s * x4 * rho_psi, -8.0 * s * x2 * rho_psi, 16.0 * x2 * s3 * rho_psi,
                       16.0 * s * rho_psi, x6 * c, -8.0 * x4 * c, 16.0 * x4 * c3, 16.0 * x2 * c,
                       -8.0 * c2 * x2 * xi, 32.0 * c2 * xi},
                      &raw);
  out.raw = std::abs(raw);
  if (std::abs(coef) < 1e-12) {
    out.flagged = true;
    out.flag = "indeterminate";
  }
  return out;
}

PdeResidual transformed_linear_residual(const ParamPoint& p, const GaugeF1& f1, RhoForm form) {
  check_point(p);
  const RhoJet j = seeded(p, f1, form, false, false, true);
  const Complex rho_psi = j.rho.c;
  const double xi = p.xi, c2 = p.c2;
  const double x2 = xi * xi, x3 = x2 * xi, x4 = x2 * x2, x5 = x4 * xi;
  const double s = std::sin(p.psi), c = std::cos(p.psi);
  const double s3 = std::sin(3.0 * p.psi), c3 = std::cos(3.0 * p.psi);
  PdeResidual out;
  Complex raw;
  out.scaled = scaled({-s * x4 * rho_psi, 8.0 * s * x2 * rho_psi, -16.0 * x2 * s3 * rho_psi,
                       -16.0 * s * rho_psi, x5 * c, -8.0 * x3 * c, 16.0 * x3 * c3, 16.0 * xi * c,
                       -8.0 * c2 * x4, 32.0 * c2 * x2},
                      &raw);
  out.raw = std::abs(raw);
  return out;
}

UVPair uv_from_rho(const ParamPoint& p, const GaugeF1& f1, RhoForm form) {
  const RhoValue rv = rho_eval(p, f1, form);
  UVPair out;
  out.u = rv.rho_xi;
  out.v = p.xi * rv.rho_xi - rv.rho;
  out.max_imag = std::max(std::abs(out.u.imag()), std::abs(out.v.imag()));
  return out;
}

UVJet uv_jet(const ParamPoint& p, const GaugeF1& f1, RhoForm form) {
  const RhoPartials d = rho_partials(p, f1, form);
  UVJet j;
  j.u = d.rho_xi;
  j.v = p.xi * d.rho_xi - d.rho;
  j.u_xi = d.rho_xixi;
  j.u_psi = d.rho_xipsi;
  j.v_xi = (d.rho_xi + p.xi * d.rho_xixi) - d.rho_xi;
  j.v_psi = p.xi * d.rho_xipsi - d.rho_psi;
  return j;
}

PdeResidual parametric_relation_residual(const ParamPoint& p, const GaugeF1& f1,
                                         CoefficientReading reading, RhoForm form) {
  const UVJet j = uv_jet(p, f1, form);
  const Complex R = reading == CoefficientReading::Xi ? Complex(p.xi) : j.v;
  const Complex R2 = R * R, R3 = R2 * R, R4 = R2 * R2, R5 = R4 * R;
  const double s = std::sin(p.psi), c = std::cos(p.psi);
  const double s3 = std::sin(3.0 * p.psi), c3 = std::cos(3.0 * p.psi);
  const double c2 = p.c2;
  const Complex a = j.u_psi * j.v_xi;
  const Complex b = j.u_xi * j.v_psi;
  PdeResidual out;
  Complex raw;
  out.scaled = scaled({8.0 * s * R2 * a, -s * R4 * a, -16.0 * R2 * s3 * a, -16.0 * s * a,
                       s * R4 * b, -8.0 * s * R2 * b, 16.0 * R2 * s3 * b, 16.0 * s * b,
                       16.0 * c * R * j.u_xi, -8.0 * c * R3 * j.u_xi, c * R5 * j.u_xi,
                       16.0 * R3 * c3 * j.u_xi, -8.0 * c2 * R3 * j.v_xi, 32.0 * c2 * R * j.v_xi},
                      &raw);
  out.raw = std::abs(raw);
  return out;
}

Reconstruction reconstruct_H(double r, double psi, double c2, double xi_lo, double xi_hi,
                             const GaugeF1& f1, RhoForm form) {
  if (!(xi_lo > 0.0 && xi_lo < xi_hi)) throw DomainError("reconstruct_H: need 0 < xi_lo < xi_hi");
  auto v_minus_r = [&](double xi) {
    const UVPair uv = uv_from_rho({xi, psi, c2}, f1, form);
    if (std::abs(uv.v.imag()) > 1e-9 * std::max(1.0, std::abs(uv.v))) {
      throw RegionError("reconstruct_H: v is complex-valued inside the bracket");
    }
    return uv.v.real() - r;
  };
  const auto cells = scan_sign_changes(v_minus_r, xi_lo, xi_hi, 200);
  if (cells.empty()) throw NoRootError("reconstruct_H: v(xi, psi) - r has no sign change");
  const double mid = 0.5 * (xi_lo + xi_hi);
  const auto best = std::min_element(cells.begin(), cells.end(), [mid](const auto& a, const auto& b) {
    return std::abs(0.5 * (a.first + a.second) - mid) < std::abs(0.5 * (b.first + b.second) - mid);
  });
  Reconstruction out;
  out.xi = best->first == best->second ? best->first
                                       : brent_root(v_minus_r, best->first, best->second, 1e-15).x;
  out.H = uv_from_rho({out.xi, psi, c2}, f1, form).u.real();
  out.roots_in_bracket = static_cast<int>(cells.size());
  return out;
}

HPartials parametric_h_partials(const UVJet& j) {
  HPartials out;
  out.singular = std::abs(j.v_xi) < 1e-12 * std::max(1.0, std::abs(j.v));
  out.H_r = j.u_xi / j.v_xi;
  out.H_psi = j.u_psi - j.v_psi * j.u_xi / j.v_xi;
  return out;
}

HEquationCoefficients h_equation_coefficients(Complex R, double psi) {
  const Complex R2 = R * R, R3 = R2 * R, R4 = R2 * R2, R5 = R4 * R;
  const double s = std::sin(psi), c = std::cos(psi);
  const double s3 = std::sin(3.0 * psi), c3 = std::cos(3.0 * psi);
  return {c * R5 - 8.0 * c * R3 + 16.0 * R3 * c3 + 16.0 * c * R,
          -s * R4 + 8.0 * s * R2 - 16.0 * R2 * s3 - 16.0 * s, -8.0 * R3 + 32.0 * R};
}

namespace {

PdeResidual h_equation_residual_terms(Complex R, double psi, double c2, const HPartials& h) {
  const Complex R2 = R * R, R3 = R2 * R, R4 = R2 * R2, R5 = R4 * R;
  const double s = std::sin(psi), c = std::cos(psi);
  const double s3 = std::sin(3.0 * psi), c3 = std::cos(3.0 * psi);
  PdeResidual out;
  Complex raw;
  out.scaled = scaled({h.H_r * c * R5, -8.0 * h.H_r * c * R3, 16.0 * h.H_r * R3 * c3,
                       16.0 * h.H_r * c * R, -8.0 * c2 * R3, 32.0 * c2 * R, -h.H_psi * s * R4,
                       8.0 * h.H_psi * s * R2, -16.0 * h.H_psi * R2 * s3, -16.0 * h.H_psi * s},
                      &raw);
  out.raw = std::abs(raw);
  if (h.singular) {
    out.flagged = true;
    out.flag = "chain_rule_singular";
  }
  return out;
}

}  // namespace

PdeResidual h_pde_residual_at(const ParamPoint& p, const GaugeF1& f1, CoefficientReading reading,
                              RhoForm form) {
  const UVJet j = uv_jet(p, f1, form);
  const Complex R = reading == CoefficientReading::Xi ? Complex(p.xi) : j.v;
  return h_equation_residual_terms(R, p.psi, p.c2, parametric_h_partials(j));
}

PdeResidual h_pde_residual(double r, double psi, double c2, double xi_lo, double xi_hi,
                           const GaugeF1& f1, CoefficientReading reading, RhoForm form) {
  const Reconstruction rec = reconstruct_H(r, psi, c2, xi_lo, xi_hi, f1, form);
  return h_pde_residual_at({rec.xi, psi, c2}, f1, reading, form);
}

PdeResidual phi_flow_derivative(const SphericalState& st, double c2, double xi_lo, double xi_hi,
                                const GaugeF1& f1, RhoForm form) {
  const Reconstruction rec = reconstruct_H(st.r, st.psi, c2, xi_lo, xi_hi, f1, form);
  const HPartials h = parametric_h_partials(uv_jet({rec.xi, st.psi, c2}, f1, form));
  const double r = st.r, r2 = r * r, r3 = r2 * r, r4 = r2 * r2, r5 = r4 * r;
  const double s = std::sin(st.psi), c = std::cos(st.psi);
  PdeResidual out;
  Complex raw;
  out.scaled = scaled({-s * r4 * h.H_psi, 24.0 * s * r2 * h.H_psi, -64.0 * s * r2 * c * c * h.H_psi,
                       -16.0 * s * h.H_psi, -8.0 * r3 * c2, 32.0 * r * c2, c * r5 * h.H_r,
                       -56.0 * c * r3 * h.H_r, 64.0 * c * c * c * r3 * h.H_r, 16.0 * c * r * h.H_r},
                      &raw);
  out.raw = std::abs(raw);
  if (h.singular) {
    out.flagged = true;
    out.flag = "chain_rule_singular";
  }
  return out;
}

double phi_value(const SphericalState& s, double c2, double xi_lo, double xi_hi,
                 const GaugeF1& f1, RhoForm form) {
  return c2 * s.phi + reconstruct_H(s.r, s.psi, c2, xi_lo, xi_hi, f1, form).H;
}

SubstitutionMismatch xi_substitution_residual(double r, double phi, double psi, const TestGradient& E) {
  if (!(r > 0.0)) throw DomainError("xi_substitution_residual: r must be positive");
  const double xi = std::sin(psi);
  const double root = std::sqrt(std::max(0.0, 1.0 - xi * xi));  // the substitution's cos(psi)
  const double c = std::cos(psi);
  const auto g = E(r, phi, xi);
  const double Er = g[0], Ephi = g[1], Exi = g[2];
  const double r2 = r * r, r3 = r2 * r, r4 = r2 * r2, r5 = r4 * r;
  const double x2 = xi * xi;

  // (r, phi, xi) form with cos(psi) = sqrt(1 - xi^2)
  const double lhs_xi[] = {Er * root * r5,          8.0 * Er * root * r3,
                           -64.0 * Er * root * r3 * x2, 16.0 * Er * root * r,
                           -8.0 * Ephi * r3,        32.0 * Ephi * r,
                           -Exi * root * xi * r4,   -40.0 * Exi * root * xi * r2,
                           64.0 * Exi * root * x2 * xi * r2, -16.0 * Exi * root * xi};
  // (r, phi, psi) form on Phi = E(r, phi, sin psi): Phi_psi = E_xi cos(psi)
  const double Phi_psi = Exi * c;
  const double lhs_psi[] = {-xi * r4 * Phi_psi,           24.0 * xi * r2 * Phi_psi,
                            -64.0 * xi * r2 * c * c * Phi_psi, -16.0 * xi * Phi_psi,
                            -8.0 * r3 * Ephi,             32.0 * r * Ephi,
                            c * r5 * Er,                  -56.0 * c * r3 * Er,
                            64.0 * c * c * c * r3 * Er,   16.0 * c * r * Er};
  double a = 0.0, b = 0.0, big = 0.0;
  for (double t : lhs_xi) {
    a += t;
    big = std::max(big, std::abs(t));
  }
  for (double t : lhs_psi) {
    b += t;
    big = std::max(big, std::abs(t));
  }
  SubstitutionMismatch out;
  out.mismatch = big == 0.0 ? 0.0 : std::abs(a - b) / big;
  out.branch_warning = c < 0.0;
  return out;
}

}  // namespace hopf_flow
