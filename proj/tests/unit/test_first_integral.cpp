#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hopf_flow/error.hpp"
#include "hopf_flow/first_integral.hpp"

using namespace hopf_flow;

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

TEST_CASE("discriminant and real region") {
  CHECK(rho_discriminant(0.5) == doctest::Approx(16 * 0.25 - 24 * 0.0625 + 0.015625));
  const auto roots = discriminant_roots();
  CHECK(roots[0] == doctest::Approx(std::sqrt(12.0 - std::sqrt(128.0))).epsilon(1e-15));
  CHECK(roots[1] == doctest::Approx(std::sqrt(12.0 + std::sqrt(128.0))).epsilon(1e-15));
  CHECK(std::abs(rho_discriminant(roots[0])) <= 1e-13);
  CHECK(in_real_region(0.5));
  CHECK_FALSE(in_real_region(2.0));
  CHECK(in_real_region(6.0));
}

TEST_CASE("rho against a 40-digit evaluation of the closed form") {
  const RhoPartials d = rho_partials({0.5, 1.0, 1.0});
  CHECK(d.real_region);
  CHECK(d.rho.real() == doctest::Approx(-0.24127230591294375288).epsilon(1e-13));
  CHECK(d.rho.imag() == 0.0);
  CHECK(d.rho_xi.real() == doctest::Approx(-0.71541885478147506395).epsilon(1e-13));
  CHECK(d.rho_psi.real() == doctest::Approx(0.7516750151413674696).epsilon(1e-13));

  const RhoValue far = rho_eval({6.0, 2.0, 1.0});
  CHECK(far.real_region);
  CHECK(far.rho.real() == doctest::Approx(-4.6658552562273809764).epsilon(1e-13));
  CHECK(std::abs(far.rho.imag()) <= 1e-14);
}

TEST_CASE("rho domain") {
  CHECK_THROWS_AS(rho_eval({0.0, 1.0, 1.0}), DomainError);
  CHECK_THROWS_AS(rho_eval({0.5, 0.0, 1.0}), DomainError);
  CHECK_THROWS_AS(rho_eval({0.5, kPi, 1.0}), DomainError);
  CHECK_THROWS_AS(rho_eval({0.5, std::nan(""), 1.0}), DomainError);
}

TEST_CASE("the reference linear PDE is not satisfied: frozen measurement") {
  // 40-digit evaluation of the reference equation at (0.5, 1, c2 = 1): 25.22852339240169971
  const PdeResidual r = linear_pde_residual({0.5, 1.0, 1.0});
  CHECK(r.raw == doctest::Approx(25.22852339240169971).epsilon(1e-12));
  CHECK(r.scaled > 0.5);
  CHECK_FALSE(r.flagged);
}

TEST_CASE("the PDE the closed form does satisfy") {
  for (double xi : {0.1, 0.4, 0.75, 5.0, 7.5}) {
    for (double psi : {0.2, 1.0, 1.7, 2.9}) {
      for (double c2 : {0.0, 1.0, -2.5}) {
        CAPTURE(xi);
        CAPTURE(psi);
        CHECK(transformed_linear_residual({xi, psi, c2}).scaled <= 1e-12);
      }
    }
  }
}

TEST_CASE("F1 gauge") {
  const GaugeF1 f1{{1.0, 3.0, 0.0, -1.0}};
  CHECK(f1.value(2.0) == 1.0 + 6.0 - 8.0);
  CHECK(f1.derivative(2.0) == 3.0 - 12.0);
  const ParamPoint p{0.6, 1.3, 1.0};
  const RhoValue a = rho_eval(p);
  const RhoValue b = rho_eval(p, f1);
  CHECK(b.rho.real() - a.rho.real() == doctest::Approx(f1.value(0.6)).epsilon(1e-14));
  CHECK(b.rho_xi.real() - a.rho_xi.real() == doctest::Approx(f1.derivative(0.6)).epsilon(1e-14));
  // the reference PDE involves no xi-derivative: bit-identical residuals
  CHECK(linear_pde_residual(p, f1).raw == linear_pde_residual(p).raw);
}

TEST_CASE("Legendre structure v_xi = xi u_xi") {
  for (double xi : {0.1, 0.5, 0.8, 6.0}) {
    for (double psi : {0.3, 1.5, 2.6}) {
      const UVJet j = uv_jet({xi, psi, 1.0});
      const RhoPartials d = rho_partials({xi, psi, 1.0});
      const double scale = std::max(std::abs(d.rho_xi), std::abs(xi * d.rho_xixi));
      CHECK(std::abs(j.v_xi - xi * j.u_xi) <= 1e-12 * scale);
    }
  }
}

TEST_CASE("u and v are real in the real region") {
  const UVPair uv = uv_from_rho({0.3, 1.1, 1.0});
  CHECK(uv.max_imag <= 1e-15);
  const UVPair cx = uv_from_rho({2.0, 1.1, 1.0});
  CHECK(cx.max_imag > 1e-3);
}

TEST_CASE("continued form is real and continuous across the discriminant boundary") {
  const auto roots = discriminant_roots();
  for (double xb : roots) {
    for (double psi : {0.4, 1.0, 2.3}) {
      const Complex a = rho_eval({xb * (1.0 - 1e-9), psi, 1.0}, {}, RhoForm::Continued).rho;
      const Complex b = rho_eval({xb * (1.0 + 1e-9), psi, 1.0}, {}, RhoForm::Continued).rho;
      CHECK(a.imag() == 0.0);
      CHECK(std::abs(a - b) <= 1e-6);
      // the literal form blows up like 1/S there
      const Complex pa = rho_eval({xb * (1.0 - 1e-9), psi, 1.0}).rho;
      const Complex pb = rho_eval({xb * (1.0 + 1e-9), psi, 1.0}).rho;
      CHECK(std::abs(pa - pb) > 1.0);
    }
  }
}

TEST_CASE("continued and literal forms differ by a branch constant") {
  // Away from the literal arctan pole (X = 0) the difference is constant in
  // psi; across the pole it flips sign, a jump of pi * c2 * w(xi) / sqrt(q).
  for (double xi : {0.3, 0.7, 5.5}) {
    const double x2 = xi * xi, x4 = x2 * x2, x6 = x4 * x2;
    const double D = 16.0 + 40.0 * x2 + x4;
    const double q = 16.0 * x2 - 24.0 * x4 + x6;
    const double jump = std::abs(std::numbers::pi * (256.0 * x4 - 64.0 * x6) / D / std::sqrt(q));
    const double chi2_pole = (176.0 * x2 - 32.0 - 2.0 * x4) / (2.0 * D);
    const double psi_pole = chi2_pole > 0.0 ? 2.0 * std::atan(std::sqrt(chi2_pole)) : -1.0;
    auto diff = [&](double psi) {
      return rho_eval({xi, psi, 1.0}).rho - rho_eval({xi, psi, 1.0}, {}, RhoForm::Continued).rho;
    };
    const Complex ref = diff(0.3);
    for (double psi : {0.5, 0.8, 1.2, 1.6, 2.0, 2.2, 2.8}) {
      const Complex d = diff(psi);
      CHECK(d.imag() == 0.0);
      const bool crossed = psi_pole > 0.3 && psi > psi_pole;
      const double expect = crossed ? ref.real() + (ref.real() > 0.0 ? -jump : jump) : ref.real();
      CHECK(std::abs(d.real() - expect) <= 1e-10 * std::max(1.0, std::abs(expect)));
    }
    if (psi_pole > 0.0) CHECK(std::abs(std::abs(ref.real()) - 0.5 * jump) <= 1e-10 * jump);
  }
}

TEST_CASE("parametric relation closes with coefficients in xi, not in v") {
  for (double xi : {0.2, 0.6, 5.5}) {
    for (double psi : {0.4, 1.4, 2.5}) {
      CHECK(parametric_relation_residual({xi, psi, 1.0}, {}, CoefficientReading::Xi).scaled <= 1e-10);
      CHECK(h_pde_residual_at({xi, psi, 1.0}, {}, CoefficientReading::Xi).scaled <= 1e-10);
    }
  }
  // measured: the v reading leaves an O(1) scaled residual
  CHECK(parametric_relation_residual({0.5, 1.0, 1.0}, {}, CoefficientReading::V).scaled > 1e-2);
  CHECK(h_pde_residual_at({0.5, 1.0, 1.0}, {}, CoefficientReading::V).scaled > 1e-2);
}

TEST_CASE("xi-reading residual ignores an additive constant in F1") {
  const ParamPoint p{0.45, 1.2, 1.0};
  const GaugeF1 shift{{5.0}};
  CHECK(h_pde_residual_at(p, shift, CoefficientReading::Xi).raw ==
        doctest::Approx(h_pde_residual_at(p, {}, CoefficientReading::Xi).raw).epsilon(1e-12));
}

TEST_CASE("reconstruct_H round trip") {
  const double psi = 1.5, xi0 = 0.3;
  const UVPair uv = uv_from_rho({xi0, psi, 1.0});
  const Reconstruction rec = reconstruct_H(uv.v.real(), psi, 1.0, 0.2, 0.4);
  CHECK(rec.xi == doctest::Approx(xi0).epsilon(1e-12));
  CHECK(rec.H == doctest::Approx(uv.u.real()).epsilon(1e-10));
  CHECK(rec.roots_in_bracket >= 1);

  CHECK_THROWS_AS(reconstruct_H(1e3, psi, 1.0, 0.2, 0.4), NoRootError);
  CHECK_THROWS_AS(reconstruct_H(0.1, psi, 1.0, 0.9, 1.5), RegionError);
  CHECK_THROWS_AS(reconstruct_H(0.1, psi, 1.0, 0.4, 0.2), DomainError);
}

TEST_CASE("h_pde_residual at a physical point matches the parametric point") {
  const double psi = 1.5, xi0 = 0.3;
  const double r = uv_from_rho({xi0, psi, 1.0}).v.real();
  const PdeResidual a = h_pde_residual(r, psi, 1.0, 0.2, 0.4, {}, CoefficientReading::Xi);
  const PdeResidual b = h_pde_residual_at({xi0, psi, 1.0}, {}, CoefficientReading::Xi);
  CHECK(a.scaled == doctest::Approx(b.scaled).epsilon(1e-6));
}

TEST_CASE("flow derivative of Phi is a measurement along the field") {
  const double psi = 1.5, xi0 = 0.3;
  const double r = uv_from_rho({xi0, psi, 1.0}).v.real();
  const PdeResidual d = phi_flow_derivative({r, 0.7, psi, false}, 1.0, 0.2, 0.4);
  CHECK(std::isfinite(d.scaled));
  CHECK_FALSE(d.flagged);
  const double phi0 = phi_value({r, 0.0, psi, false}, 1.0, 0.2, 0.4);
  const double phi1 = phi_value({r, 1.0, psi, false}, 1.0, 0.2, 0.4);
  CHECK(phi1 - phi0 == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("xi substitution reproduces the psi form on test functions") {
  const TestGradient constant = [](double, double, double) { return std::array<double, 3>{0, 0, 0}; };
  CHECK(xi_substitution_residual(1.5, 0.3, 0.7, constant).mismatch == 0.0);

  const TestGradient phi = [](double, double, double) { return std::array<double, 3>{0, 1, 0}; };
  const TestGradient mixed = [](double r, double ph, double xi) {
    return std::array<double, 3>{2 * r * xi, xi * xi, r * r + 2 * ph * xi};
  };
  for (double r : {0.5, 2.0, 4.0}) {
    for (double psi : {0.2, 0.8, 1.4}) {
      const SubstitutionMismatch a = xi_substitution_residual(r, 0.3, psi, phi);
      const SubstitutionMismatch b = xi_substitution_residual(r, 0.3, psi, mixed);
      CHECK(a.mismatch <= 1e-12);
      CHECK(b.mismatch <= 1e-12);
      CHECK_FALSE(b.branch_warning);
    }
  }
  const SubstitutionMismatch w = xi_substitution_residual(2.0, 0.3, 2.0, mixed);
  CHECK(w.branch_warning);
  CHECK(w.mismatch > 1e-3);
  CHECK_THROWS_AS(xi_substitution_residual(0.0, 0.3, 1.0, mixed), DomainError);
}
