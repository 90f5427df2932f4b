#pragma once

#include <optional>
#include <span>

namespace hopf_flow {

struct CartesianState {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

/// Spherical point with x = r cos(phi) sin(psi), y = r sin(phi) sin(psi),
/// z = r cos(psi). phi is kept unwrapped; on_axis marks sin(psi) = 0, where
/// phi carries no information.
struct SphericalState {
  double r = 0.0;
  double phi = 0.0;
  double psi = 0.0;
  bool on_axis = false;
};

struct Velocity3 {
  double vx = 0.0;
  double vy = 0.0;
  double vz = 0.0;
};

struct SphericalVelocity {
  double dr = 0.0;
  double dphi = 0.0;
  double dpsi = 0.0;
};

struct DerivedRates {
  std::optional<double> rate_arctan;  // empty on the z-axis
  double rate_r2 = 0.0;
};

struct SignReport {
  int sigma = 0;
  double max_residual = 0.0;
  double other_sign_residual = 0.0;
  bool consistent = false;
  std::size_t probes = 0;
};

/// Cartesian Hopf field. Unit length everywhere, so the flow parameter is
/// arclength.
Velocity3 eval_cartesian(const CartesianState& p);

/// Spherical system in its reference form, including its orientation. It is the
/// time reversal of eval_cartesian (see pushforward_sign). Throws
/// SingularityError at r = 0.
SphericalVelocity eval_spherical(const SphericalState& s);

/// Throws SingularityError at the origin. On the z-axis phi = 0 and
/// on_axis is set.
SphericalState to_spherical(const CartesianState& p);
CartesianState from_spherical(const SphericalState& s);

/// Rates of arctan(y/x) and x^2 + y^2 along the Cartesian field.
DerivedRates derived_rates(const CartesianState& p);

/// Jacobian of (x,y,z) -> (r,phi,psi) applied to a Cartesian velocity at p.
/// Requires p off the z-axis.
SphericalVelocity pushforward(const CartesianState& p, const Velocity3& v);

/// Finds the single sign sigma in {+1,-1} with J * V_cart = sigma * V_sph at
/// every probe. Probes on the z-axis or at the origin are rejected with
/// DomainError; an inconsistent sign is reported, not thrown.
SignReport pushforward_sign(std::span<const CartesianState> probes, double tol = 1e-10);

}  // namespace hopf_flow
