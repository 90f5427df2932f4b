#pragma once

#include <vector>

#include "hopf_flow/integrator.hpp"

namespace hopf_flow {

// Chart guards for the spherical system: it divides by r, and phi is
// meaningless on the axis.
inline constexpr double kGuardRadius = 1e-6;
inline constexpr double kGuardSinPsi = 1e-8;

/// State (x, y, z).
VectorField cartesian_flow();

/// State (r, phi, psi), the spherical system in its reference form.
VectorField spherical_flow();

/// Events "origin" (r falls below kGuardRadius) and "axis" (|sin psi| falls
/// below kGuardSinPsi) on a (r, phi, psi) state.
std::vector<Event> spherical_guards();

}  // namespace hopf_flow
