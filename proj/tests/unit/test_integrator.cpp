#include <doctest.h>

#include <cmath>
#include <numbers>

#include "hopf_flow/error.hpp"
#include "hopf_flow/integrator.hpp"

using namespace hopf_flow;

namespace {

void exp_growth(double, std::span<const double> y, std::span<double> d) { d[0] = y[0]; }

// unit-speed rotation in the plane
void rotation(double, std::span<const double> y, std::span<double> d) {
  d[0] = -y[1];
  d[1] = y[0];
}

}  // namespace

TEST_CASE("exponential growth") {
  const Trajectory t = integrate(exp_growth, {1.0}, 0.0, 2.0);
  CHECK(t.meta.stop_reason == StopReason::ReachedEnd);
  CHECK(t.t_end() == 2.0);
  CHECK(t.back().y[0] == doctest::Approx(std::exp(2.0)).epsilon(1e-9));
  CHECK(t.meta.accepted_steps + 1 == t.size());
}

TEST_CASE("backward integration") {
  const Trajectory t = integrate(exp_growth, {1.0}, 0.0, -3.0);
  CHECK(t.t_end() == -3.0);
  CHECK(t.back().y[0] == doctest::Approx(std::exp(-3.0)).epsilon(1e-9));
  for (std::size_t i = 1; i < t.size(); ++i) CHECK(t.samples[i].t < t.samples[i - 1].t);
}

TEST_CASE("zero span gives a single sample") {
  const Trajectory t = integrate(exp_growth, {1.0}, 0.5, 0.5);
  CHECK(t.size() == 1);
  CHECK(t.front().y[0] == 1.0);
}

TEST_CASE("stops are hit exactly") {
  IntegratorConfig cfg;
  cfg.stops = {0.1, 0.25, 1.0 / 3.0, 1.7};
  const Trajectory t = integrate(rotation, {1.0, 0.0}, 0.0, 2.0, cfg);
  for (double s : cfg.stops) {
    const Sample* smp = t.find_exact(s);
    REQUIRE(smp);
    CHECK(smp->y[0] == doctest::Approx(std::cos(s)).epsilon(1e-9));
  }
}

TEST_CASE("dense output") {
  const Trajectory t = integrate(rotation, {1.0, 0.0}, 0.0, 6.0);
  for (double s : {0.123, 2.5, 5.99}) {
    const State y = t.at(s);
    CHECK(y[0] == doctest::Approx(std::cos(s)).epsilon(1e-7));
    CHECK(y[1] == doctest::Approx(std::sin(s)).epsilon(1e-7));
  }
  CHECK_THROWS_AS(t.at(6.5), DomainError);
  CHECK(t.path_length() == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("event location") {
  IntegratorConfig cfg;
  cfg.events.push_back({"y=0.5", [](double, std::span<const double> y) { return y[1] - 0.5; },
                        EventDirection::Rising});
  const Trajectory t = integrate(rotation, {1.0, 0.0}, 0.0, 3.0, cfg);
  CHECK(t.meta.stop_reason == StopReason::HitEvent);
  CHECK(t.meta.event_name == "y=0.5");
  CHECK(t.t_end() == doctest::Approx(std::numbers::pi / 6.0).epsilon(1e-11));
}

TEST_CASE("event direction filters crossings") {
  IntegratorConfig cfg;
  cfg.events.push_back({"down", [](double, std::span<const double> y) { return y[1] - 0.5; },
                        EventDirection::Falling});
  const Trajectory t = integrate(rotation, {1.0, 0.0}, 0.0, 3.0, cfg);
  CHECK(t.t_end() == doctest::Approx(5.0 * std::numbers::pi / 6.0).epsilon(1e-11));
}

TEST_CASE("domain violation ends the run") {
  // y' = -1 leaves y > 0 at t = 0.5; the field refuses y <= 0
  const VectorField f = [](double, std::span<const double> y, std::span<double> d) {
    if (y[0] <= 0.0) throw DomainError("y must stay positive");
    d[0] = -1.0;
  };
  const Trajectory t = integrate(f, {0.5}, 0.0, 1.0);
  CHECK(t.meta.stop_reason == StopReason::HitEvent);
  CHECK(t.meta.event_name.rfind("domain", 0) == 0);
  CHECK(t.t_end() <= 0.5);
  CHECK(t.t_end() > 0.49);
  CHECK(t.back().y[0] > 0.0);
}

TEST_CASE("finite-time blow-up of the derivative underflows the step") {
  // y = sqrt(1 - 2t): y' = -1/y is unbounded at t = 0.5, the discrete
  // solution stays positive, so the controller gives up rather than the field
  const VectorField f = [](double, std::span<const double> y, std::span<double> d) {
    if (y[0] <= 0.0) throw DomainError("y must stay positive");
    d[0] = -1.0 / y[0];
  };
  const Trajectory t = integrate(f, {1.0}, 0.0, 1.0);
  CHECK(t.meta.stop_reason == StopReason::StepUnderflow);
  CHECK(t.t_end() == doctest::Approx(0.5).epsilon(1e-6));
}

TEST_CASE("config validation") {
  IntegratorConfig cfg;
  cfg.rel_tol = 1e-16;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.rel_tol = 1e-3;
  cfg.abs_tol = 0.1;
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg.abs_tol = 1e-9;
  cfg.min_step = 2.0;
  cfg.max_step = 1.0;
  CHECK_THROWS_AS(integrate(exp_growth, {1.0}, 0.0, 1.0, cfg), DomainError);
}

TEST_CASE("scalar wrapper") {
  const Trajectory t = integrate_scalar([](double x, double y) { return -2.0 * x * y; }, 0.0, 1.0, 1.5);
  CHECK(t.back().y[0] == doctest::Approx(std::exp(-2.25)).epsilon(1e-9));
}

TEST_CASE("fifth-order convergence") {
  auto err = [](double tol) {
    IntegratorConfig cfg;
    cfg.rel_tol = cfg.abs_tol = tol;
    cfg.max_step = 10.0;
    const Trajectory t = integrate(rotation, {1.0, 0.0}, 0.0, 10.0, cfg);
    return std::pair{std::hypot(t.back().y[0] - std::cos(10.0), t.back().y[1] - std::sin(10.0)),
                     10.0 / double(t.meta.accepted_steps)};
  };
  const auto [e1, h1] = err(1e-6);
  const auto [e2, h2] = err(1e-10);
  CHECK(std::log(e1 / e2) / std::log(h1 / h2) >= 3.5);
}
