#pragma once

#include <complex>

namespace hopf_flow {

/// Largest argument accepted by the real-argument Bessel routines.
inline constexpr double kBesselMaxArgument = 60.0;

/// I0, I1, K0, K1 at one positive argument, plus K0, K1 continued to -z.
struct BesselQuad {
  double z = 0.0;
  double i0 = 0.0;
  double i1 = 0.0;
  double k0 = 0.0;
  double k1 = 0.0;
  std::complex<double> continued_k0;
  std::complex<double> continued_k1;
};

/// Requires 0 < z <= 60; throws DomainError otherwise.
BesselQuad bessel_quad(double z);

double bessel_i0(double z);
double bessel_i1(double z);
double bessel_k0(double z);
double bessel_k1(double z);

/// K_nu on the ray arg = pi:
///   K_nu(z e^{i pi}) = (-1)^nu K_nu(z) - i pi I_nu(z),  nu in {0, 1}.
std::complex<double> bessel_k_continued(double z, int nu);

}  // namespace hopf_flow
