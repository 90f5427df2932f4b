#include "hopf_flow/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hopf_flow/error.hpp"

namespace hopf_flow {

namespace {

void require_finite(double a, double b, double c, const char* op) {
  if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) {
    throw DomainError(std::string(op) + ": non-finite input");
  }
}

double norm3(double a, double b, double c) { return std::sqrt(a * a + b * b + c * c); }

}  // namespace

Velocity3 eval_cartesian(const CartesianState& p) {
  require_finite(p.x, p.y, p.z, "eval_cartesian");
  const double x = p.x, y = p.y, z = p.z;
  const double s = x * x + y * y + z * z;
  const double den = (s + 4.0) * (s + 4.0);
  return {
      8.0 * (4.0 * z * x - y * s + 4.0 * y) / den,
      8.0 * (4.0 * z * y + x * s - 4.0 * x) / den,
      (24.0 * x * x + 24.0 * y * y - 8.0 * z * z - s * s - 16.0) / den,
  };
}

SphericalVelocity eval_spherical(const SphericalState& s) {
  require_finite(s.r, s.phi, s.psi, "eval_spherical");
  if (s.r <= 0.0) throw SingularityError("eval_spherical: r = 0 is singular");
  const double r = s.r;
  const double r2 = r * r;
  const double sn = std::sin(s.psi);
  const double cs = std::cos(s.psi);
  const double den = 16.0 + r2 * r2 + 8.0 * r2;
  return {
      (r2 * r2 + 8.0 * r2 - 64.0 * r2 * sn * sn + 16.0) * cs / den,
      -8.0 * (r2 - 4.0) / den,
      -sn * (r2 * r2 + 40.0 * r2 - 64.0 * r2 * sn * sn + 16.0) / (r * den),
  };
}

SphericalState to_spherical(const CartesianState& p) {
  require_finite(p.x, p.y, p.z, "to_spherical");
  const double rho = std::hypot(p.x, p.y);
  const double r = norm3(p.x, p.y, p.z);
  if (r == 0.0) throw SingularityError("to_spherical: origin has no spherical representation");
  SphericalState s;
  s.r = r;
  s.psi = std::atan2(rho, p.z);
  if (rho == 0.0) {
    s.phi = 0.0;
    s.on_axis = true;
  } else {
    s.phi = std::atan2(p.y, p.x);
  }
  return s;
}

CartesianState from_spherical(const SphericalState& s) {
  require_finite(s.r, s.phi, s.psi, "from_spherical");
  const double sn = std::sin(s.psi);
  return {s.r * std::cos(s.phi) * sn, s.r * std::sin(s.phi) * sn, s.r * std::cos(s.psi)};
}

DerivedRates derived_rates(const CartesianState& p) {
  require_finite(p.x, p.y, p.z, "derived_rates");
  const double rho2 = p.x * p.x + p.y * p.y;
  const double s = rho2 + p.z * p.z;
  const double den = (s + 4.0) * (s + 4.0);
  DerivedRates out;
  if (rho2 > 0.0) out.rate_arctan = 8.0 * (s - 4.0) / den;
  out.rate_r2 = 64.0 * p.z * rho2 / den;
  return out;
}

SphericalVelocity pushforward(const CartesianState& p, const Velocity3& v) {
  const double rho2 = p.x * p.x + p.y * p.y;
  if (rho2 == 0.0) throw DomainError("pushforward: point on the z-axis");
  const double rho = std::sqrt(rho2);
  const double r2 = rho2 + p.z * p.z;
  const double r = std::sqrt(r2);
  const double radial_xy = p.x * v.vx + p.y * v.vy;
  return {
      (radial_xy + p.z * v.vz) / r,
      (p.x * v.vy - p.y * v.vx) / rho2,
      (p.z * radial_xy / rho - rho * v.vz) / r2,
  };
}

SignReport pushforward_sign(std::span<const CartesianState> probes, double tol) {
  double worst_plus = 0.0;
  double worst_minus = 0.0;
  for (const auto& p : probes) {
    if (p.x == 0.0 && p.y == 0.0) {
      throw DomainError("pushforward_sign: probe on the z-axis or at the origin");
    }
    const SphericalVelocity j = pushforward(p, eval_cartesian(p));
    const SphericalVelocity sph = eval_spherical(to_spherical(p));
    worst_plus = std::max(worst_plus, norm3(j.dr - sph.dr, j.dphi - sph.dphi, j.dpsi - sph.dpsi));
    worst_minus = std::max(worst_minus, norm3(j.dr + sph.dr, j.dphi + sph.dphi, j.dpsi + sph.dpsi));
  }
  SignReport rep;
  rep.probes = probes.size();
  if (worst_minus <= worst_plus) {
    rep.sigma = -1;
    rep.max_residual = worst_minus;
    rep.other_sign_residual = worst_plus;
  } else {
    rep.sigma = +1;
    rep.max_residual = worst_plus;
    rep.other_sign_residual = worst_minus;
  }
  rep.consistent = rep.max_residual <= tol;
  return rep;
}

}  // namespace hopf_flow
