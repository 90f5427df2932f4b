#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hopf_flow/error.hpp"
#include "hopf_flow/reduced_system.hpp"

using namespace hopf_flow;

TEST_CASE("H equation right-hand side") {
  CHECK(h_rhs(2.0, 1.0) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));
  CHECK(h_equation_residual(2.0, 1.0, -1.0 / 3.0) <= 1e-15);
  CHECK(h_equation_residual(2.0, 1.0, 0.0) > 0.1);
  CHECK_THROWS_AS(h_rhs(0.0, 0.5), DomainError);
}

TEST_CASE("turning locus") {
  // H = (r^2 + 4)^2 / (64 r^2): at r = 2 that is 1/4
  CHECK(h_turning_coefficient(2.0, 0.25) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK_THROWS_AS(h_rhs(2.0, 0.25), TurningPointError);
  try {
    h_rhs(2.0, 0.25);
  } catch (const TurningPointError& e) {
    CHECK(std::abs(e.locus_value()) < kTurningEpsilon);
  }
  // the locus only reaches H <= 1 for r in [4 - 2 sqrt 3, 4 + 2 sqrt 3]
  const double lo = 4.0 - 2.0 * std::sqrt(3.0);
  CHECK(h_turning_coefficient(lo, 1.0) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("psi equation agrees with the H equation under H = sin^2 psi") {
  for (double r : {0.5, 1.3, 3.0, 6.0}) {
    for (double psi : {0.3, 0.9, 1.2, 2.0, 2.7}) {
      const double H = std::sin(psi) * std::sin(psi);
      const double lhs = 2.0 * std::sin(psi) * std::cos(psi) * psi_rhs(r, psi);
      CHECK(lhs == doctest::Approx(h_rhs(r, H)).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(psi_rhs(1.0, std::numbers::pi / 2), TurningPointError);
}

TEST_CASE("substitution check on an integrated psi curve") {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  cfg.max_step = 0.01;
  const Trajectory t = integrate_scalar(psi_rhs, 5.0, 0.5, 6.0, cfg);
  std::vector<double> r, psi;
  for (const auto& s : t.samples) {
    r.push_back(s.t);
    psi.push_back(s.y[0]);
  }
  const SubstitutionReport rep = substitution_check(r, psi);
  CHECK(rep.segments == 1);
  CHECK(rep.max_residual <= 1e-6);
}

TEST_CASE("hemisphere bookkeeping") {
  const ReducedState up = ReducedState::from_psi(1.0, 0.4);
  const ReducedState down = ReducedState::from_psi(1.0, std::numbers::pi - 0.4);
  CHECK(up.H == doctest::Approx(down.H));
  CHECK(up.psi() == doctest::Approx(0.4));
  CHECK(down.psi() == doctest::Approx(std::numbers::pi - 0.4));
}

TEST_CASE("implicit constant") {
  // -(a K0 + b K1) / (a I0 - b I1), 30-digit reference
  const ImplicitConstant c = implicit_constant(1.0, 0.5);
  CHECK(c.effective == doctest::Approx(-4.931436008177050681).epsilon(1e-13));
  CHECK(c.c1.imag() == doctest::Approx(std::numbers::pi).epsilon(1e-15));
  CHECK(implicit_constant(3.0, 0.2).effective == doctest::Approx(-1.9608658043984772295).epsilon(1e-13));
  CHECK(implicit_constant(5.0, 0.8).effective == doctest::Approx(-0.82255669583297474655).epsilon(1e-13));
  CHECK(implicit_residual(c, 1.0, 0.5) <= 1e-15);

  const ImplicitConstant real = implicit_constant(1.0, 0.5, ImplicitForm::RealK);
  CHECK(real.c1.imag() == 0.0);
  CHECK(std::abs(real.effective - c.effective) > 0.1);

  CHECK_THROWS_AS(implicit_constant(1.0, 1.5), DomainError);
  CHECK_THROWS_AS(implicit_constant(-1.0, 0.5), DomainError);
  CHECK_THROWS_AS(implicit_constant(1.0, 1e-20), DegenerateSampleError);
}

TEST_CASE("implicit constant is conserved along the H equation; only the continued form") {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-12;
  cfg.abs_tol = 1e-14;
  cfg.max_step = 0.05;
  const Trajectory t = integrate_h(3.0, 0.2, 4.0, cfg);
  REQUIRE(t.meta.stop_reason == StopReason::ReachedEnd);
  std::vector<double> r, H;
  for (const auto& s : t.samples) {
    r.push_back(s.t);
    H.push_back(s.y[0]);
  }
  const FormSelection sel = select_implicit_form(r, H);
  CHECK(sel.form == ImplicitForm::ContinuedK);
  CHECK(sel.continued_spread <= 1e-9);
  CHECK(sel.real_spread > 1e-2);
  CHECK(implicit_spread(r, H, ImplicitForm::ContinuedK) == sel.continued_spread);
}

TEST_CASE("solve_implicit inverts the relation") {
  const ImplicitConstant c = implicit_constant(3.0, 0.2);
  const ImplicitRoot root = solve_implicit(c, 3.0, 0.1, 0.3);
  CHECK(root.H == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(root.roots_in_bracket == 1);
  CHECK_FALSE(root.multiplicity_warning);
  CHECK_THROWS_AS(solve_implicit(c, 3.0, 0.3, 0.1), DomainError);
  CHECK_THROWS_AS(solve_implicit(c, 3.0, 0.6, 0.7), NoRootError);
}

TEST_CASE("integrate_h stops at events") {
  // from (1, 0.5) toward smaller r the curve folds near r = 0.986
  const Trajectory t = integrate_h(1.0, 0.5, 0.5);
  CHECK(t.meta.stop_reason == StopReason::HitEvent);
  CHECK(t.meta.event_name == "turning");
  CHECK(std::abs(h_turning_coefficient(t.t_end(), t.back().y[0])) <= 2.0 * kTurningEventLevel);
  CHECK_THROWS_AS(integrate_h(1.0, 1.5, 2.0), DomainError);
}

TEST_CASE("reduced curve through a fold") {
  const ReducedCurve c = trace_reduced_curve(ReducedState{1.0, 0.5, Hemisphere::Upper}, 0.5, 0.05, 20.0);
  CHECK(c.turning_points >= 1);
  REQUIRE(c.points.size() > 10);
  bool arclength = false;
  for (const auto& p : c.points) arclength = arclength || p.arclength_segment;
  CHECK(arclength);
  // every point off the fold still satisfies the relation with the starting constant
  const ImplicitConstant k = implicit_constant(1.0, 0.5);
  double worst = 0.0;
  for (const auto& p : c.points) {
    if (p.H <= 1e-6 || p.H >= 1.0) continue;
    worst = std::max(worst, implicit_residual(k, p.r, p.H));
  }
  CHECK(worst <= 1e-8);
}
