#include "hopf_flow/flows.hpp"

#include <cmath>

#include "hopf_flow/fields.hpp"

namespace hopf_flow {

VectorField cartesian_flow() {
  return [](double, std::span<const double> y, std::span<double> d) {
    const Velocity3 v = eval_cartesian({y[0], y[1], y[2]});
    d[0] = v.vx;
    d[1] = v.vy;
    d[2] = v.vz;
  };
}

VectorField spherical_flow() {
  return [](double, std::span<const double> y, std::span<double> d) {
    const SphericalVelocity v = eval_spherical({y[0], y[1], y[2], false});
    d[0] = v.dr;
    d[1] = v.dphi;
    d[2] = v.dpsi;
  };
}

std::vector<Event> spherical_guards() {
  return {
      {"origin", [](double, std::span<const double> y) { return y[0] - kGuardRadius; },
       EventDirection::Falling},
      {"axis", [](double, std::span<const double> y) { return std::abs(std::sin(y[2])) - kGuardSinPsi; },
       EventDirection::Falling},
  };
}

}  // namespace hopf_flow
