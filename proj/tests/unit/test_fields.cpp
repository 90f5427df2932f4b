#include <doctest.h>

#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

#include "hopf_flow/error.hpp"
#include "hopf_flow/fields.hpp"
#include "hopf_flow/flows.hpp"

using namespace hopf_flow;

namespace {

// Integer numerators of the Cartesian field over the common denominator (s+4)^2.
struct RationalField {
  std::int64_t nx, ny, nz, den;
};

RationalField rational_field(std::int64_t x, std::int64_t y, std::int64_t z) {
  const std::int64_t s = x * x + y * y + z * z;
  return {8 * (4 * z * x - y * s + 4 * y), 8 * (4 * z * y + x * s - 4 * x),
          24 * x * x + 24 * y * y - 8 * z * z - s * s - 16, (s + 4) * (s + 4)};
}

}  // namespace

TEST_CASE("cartesian field at hand-computed points") {
  const Velocity3 a = eval_cartesian({1.0, 0.0, 0.0});
  CHECK(a.vx == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(a.vy == doctest::Approx(-24.0 / 25.0).epsilon(1e-15));
  CHECK(a.vz == doctest::Approx(7.0 / 25.0).epsilon(1e-15));

  const Velocity3 b = eval_cartesian({1.0, 1.0, 1.0});
  CHECK(b.vx == doctest::Approx(40.0 / 49.0).epsilon(1e-15));
  CHECK(b.vy == doctest::Approx(24.0 / 49.0).epsilon(1e-15));
  CHECK(b.vz == doctest::Approx(15.0 / 49.0).epsilon(1e-15));

  // origin: (0, 0, -1)
  const Velocity3 o = eval_cartesian({0.0, 0.0, 0.0});
  CHECK(o.vz == -1.0);
}

TEST_CASE("unit norm is exact in rational arithmetic at integer points") {
  const std::vector<std::array<std::int64_t, 3>> pts = {
      {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {1, 1, 1},  {2, -1, 3}, {-3, 2, 1}, {4, 4, -2},
      {0, 0, 2}, {2, 0, 0}, {5, -5, 5}, {-1, -1, -1}, {7, 1, 0}, {0, -6, 3}, {3, 3, 3},
      {-2, 5, -4}, {9, 0, -1}, {1, 8, 2}, {-7, -7, 0}, {6, -2, 9}, {10, 0, 0}};
  for (const auto& p : pts) {
    const RationalField f = rational_field(p[0], p[1], p[2]);
    CHECK(f.nx * f.nx + f.ny * f.ny + f.nz * f.nz == f.den * f.den);
    const Velocity3 v = eval_cartesian({double(p[0]), double(p[1]), double(p[2])});
    CHECK(v.vx == doctest::Approx(double(f.nx) / double(f.den)).epsilon(1e-15));
    CHECK(v.vy == doctest::Approx(double(f.ny) / double(f.den)).epsilon(1e-15));
    CHECK(v.vz == doctest::Approx(double(f.nz) / double(f.den)).epsilon(1e-15));
    CHECK(std::abs(std::hypot(v.vx, v.vy, v.vz) - 1.0) <= 1e-15);
  }
}

TEST_CASE("non-finite input is rejected") {
  CHECK_THROWS_AS(eval_cartesian({std::nan(""), 0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(eval_cartesian({INFINITY, 0.0, 0.0}), DomainError);
}

TEST_CASE("spherical system") {
  const SphericalVelocity v = eval_spherical({2.0, 0.0, std::numbers::pi / 2, false});
  CHECK(v.dpsi == doctest::Approx(0.5).epsilon(1e-15));
  CHECK_THROWS_AS(eval_spherical({0.0, 0.0, 1.0, false}), SingularityError);
}

TEST_CASE("coordinate maps") {
  const CartesianState p{1.0, -2.0, 0.5};
  const SphericalState s = to_spherical(p);
  const CartesianState q = from_spherical(s);
  CHECK(q.x == doctest::Approx(p.x).epsilon(1e-15));
  CHECK(q.y == doctest::Approx(p.y).epsilon(1e-15));
  CHECK(q.z == doctest::Approx(p.z).epsilon(1e-15));
  CHECK_FALSE(s.on_axis);

  const SphericalState axis = to_spherical({0.0, 0.0, -3.0});
  CHECK(axis.on_axis);
  CHECK(axis.phi == 0.0);
  CHECK(axis.psi == doctest::Approx(std::numbers::pi));
  CHECK_THROWS_AS(to_spherical({0.0, 0.0, 0.0}), SingularityError);
}

TEST_CASE("derived rates") {
  // rate of arctan(y/x) is 8(s - 4)/(s + 4)^2
  const CartesianState p{1.0, 2.0, -0.5};
  const double s = 1.0 + 4.0 + 0.25;
  const DerivedRates r = derived_rates(p);
  REQUIRE(r.rate_arctan);
  CHECK(*r.rate_arctan == doctest::Approx(8.0 * (s - 4.0) / ((s + 4.0) * (s + 4.0))).epsilon(1e-14));
  const Velocity3 v = eval_cartesian(p);
  CHECK(r.rate_r2 == doctest::Approx(2.0 * (p.x * v.vx + p.y * v.vy)).epsilon(1e-15));

  CHECK_FALSE(derived_rates({0.0, 0.0, 1.0}).rate_arctan);
  // zero on the sphere r = 2
  CHECK(std::abs(*derived_rates({2.0 / std::sqrt(3.0), 2.0 / std::sqrt(3.0), 2.0 / std::sqrt(3.0)})
                      .rate_arctan) <= 1e-15);
}

TEST_CASE("pushforward of the cartesian field is the reversed spherical system") {
  const std::vector<CartesianState> probes = {
      {1.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, {-0.3, 2.0, -1.5}, {4.0, -1.0, 2.5}, {0.2, 0.1, 7.0}};
  const SignReport rep = pushforward_sign(probes);
  CHECK(rep.sigma == -1);
  CHECK(rep.consistent);
  CHECK(rep.max_residual <= 1e-13);
  CHECK(rep.other_sign_residual > 0.1);
  CHECK(rep.probes == probes.size());

  for (const auto& p : probes) {
    const SphericalVelocity a = pushforward(p, eval_cartesian(p));
    const SphericalVelocity b = eval_spherical(to_spherical(p));
    CHECK(a.dr == doctest::Approx(-b.dr).epsilon(1e-13));
    CHECK(a.dphi == doctest::Approx(-b.dphi).epsilon(1e-13));
    CHECK(a.dpsi == doctest::Approx(-b.dpsi).epsilon(1e-13));
  }
}

TEST_CASE("pushforward_sign rejects axis probes") {
  const std::vector<CartesianState> probes = {{1.0, 0.0, 0.0}, {0.0, 0.0, 2.0}};
  CHECK_THROWS_AS(pushforward_sign(probes), DomainError);
}

TEST_CASE("ODE adaptors and spherical chart guards") {
  std::array<double, 3> d{};
  const std::array<double, 3> p = {1.0, 1.0, 1.0};
  cartesian_flow()(0.0, p, d);
  const Velocity3 v = eval_cartesian({1.0, 1.0, 1.0});
  CHECK(d[0] == v.vx);
  CHECK(d[2] == v.vz);
  const std::array<double, 3> s = {2.0, 0.3, 1.0};
  spherical_flow()(0.0, s, d);
  CHECK(d[1] == eval_spherical({2.0, 0.3, 1.0, false}).dphi);

  const auto guards = spherical_guards();
  REQUIRE(guards.size() == 2);
  const std::array<double, 3> near_origin = {1e-7, 0.0, 1.0};
  const std::array<double, 3> near_axis = {1.0, 0.0, 1e-9};
  CHECK(guards[0].fn(0.0, near_origin) < 0.0);
  CHECK(guards[0].fn(0.0, s) > 0.0);
  CHECK(guards[1].fn(0.0, near_axis) < 0.0);
  CHECK(guards[1].fn(0.0, s) > 0.0);
}
