#include <cmath>
#include <random>

#include <Eigen/Geometry>

#include "doctest.h"
#include "pants/shape.hpp"

using namespace pants;

namespace {
constexpr double kPi = 3.14159265358979323846264338328;
}

TEST_CASE("gamma values at reference angles") {
  auto g10 = gamma(1, 0.0);
  CHECK(g10.value == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g10.deriv == doctest::Approx(0.0).epsilon(1e-15));

  auto g20 = gamma(2, 0.0);
  CHECK(g20.value == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(g20.deriv == doctest::Approx(-std::sqrt(3.0) / 2.0).epsilon(1e-14));

  auto g1pi = gamma(1, kPi);
  CHECK(g1pi.value == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(std::abs(g1pi.deriv) < 1e-15);
}

TEST_CASE("equilateral frame identities on random angles") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unif(0.0, 2.0 * kPi);
  for (int it = 0; it < 200; ++it) {
    const double th = unif(rng);
    for (int k = 1; k <= 3; ++k) {
      const auto g = gamma(k, th);
      CHECK(g.value * g.value + g.deriv * g.deriv == doctest::Approx(1.0).epsilon(1e-12));
    }
    for (int i = 1; i <= 3; ++i)
      for (int j = i + 1; j <= 3; ++j) {
        const auto gi = gamma(i, th), gj = gamma(j, th);
        CHECK(gi.value * gj.value + gi.deriv * gj.deriv ==
              doctest::Approx(-0.5).epsilon(1e-12));
      }
  }
}

TEST_CASE("squared sides at reference points") {
  const SideTriple pole = squared_sides(ShapePoint{kPi / 2.0, 1.234});
  CHECK(pole.s1 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pole.s2 == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(pole.s3 == doctest::Approx(1.0).epsilon(1e-14));

  const SideTriple euler = squared_sides(ShapePoint{0.0, kPi});
  CHECK(euler.s1 == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(euler.s2 == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(euler.s3 == doctest::Approx(0.5).epsilon(1e-14));

  const SideTriple coll = squared_sides(ShapePoint{0.0, 0.0});
  CHECK(coll.s1 == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(coll.s2 == doctest::Approx(1.5).epsilon(1e-14));
  CHECK(coll.s3 == doctest::Approx(1.5).epsilon(1e-14));
}

TEST_CASE("side sum is 3 and symmetries hold everywhere") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uphi(-kPi / 2, kPi / 2);
  std::uniform_real_distribution<double> uth(0.0, 2.0 * kPi);
  for (int it = 0; it < 500; ++it) {
    const double phi = uphi(rng), th = uth(rng);
    const SideTriple s = squared_sides(ShapePoint{phi, th});
    CHECK(s.sum() == doctest::Approx(3.0).epsilon(1e-12));
    for (int k = 1; k <= 3; ++k) {
      CHECK(s[k] >= 0.0);
      CHECK(s[k] <= 2.0 + 1e-15);
    }
    // phi -> -phi leaves every side fixed
    const SideTriple sm = squared_sides(ShapePoint{-phi, th});
    for (int k = 1; k <= 3; ++k) CHECK(sm[k] == doctest::Approx(s[k]).epsilon(1e-14));
    // theta -> -theta fixes s1 and swaps s2, s3
    const SideTriple sr = squared_sides(ShapePoint{phi, 2.0 * kPi - th});
    CHECK(sr.s1 == doctest::Approx(s.s1).epsilon(1e-12));
    CHECK(sr.s2 == doctest::Approx(s.s3).epsilon(1e-12));
    CHECK(sr.s3 == doctest::Approx(s.s2).epsilon(1e-12));
  }
}

TEST_CASE("potential and power sums") {
  const MassTriple unit(1, 1, 1);
  CHECK(potential(ShapePoint{kPi / 2, 0.3}, unit) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(potential(ShapePoint{0.0, kPi}, unit) == doctest::Approx(4.5).epsilon(1e-14));

  const MassTriple m112(1, 1, 2);
  CHECK(m112.p(1) == doctest::Approx(2.0));
  CHECK(m112.p(2) == doctest::Approx(2.0));
  CHECK(m112.p(3) == doctest::Approx(1.0));
  CHECK(potential(ShapePoint{kPi / 2, 0.0}, m112) == doctest::Approx(5.0).epsilon(1e-14));

  CHECK(power_sum(ShapePoint{kPi / 2, 0.1}, unit, 2) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(power_sum(ShapePoint{0.0, kPi}, unit, 2) == doctest::Approx(8.25).epsilon(1e-14));
  CHECK(power_sum(ShapePoint{0.0, kPi}, unit, 3) == doctest::Approx(16.125).epsilon(1e-14));

  CHECK_THROWS_AS(potential(ShapePoint{0.0, 0.0}, unit), CollisionSingularity);
  CHECK_THROWS_AS(power_sum(ShapePoint{0.0, 0.0}, unit, 2), CollisionSingularity);
}

TEST_CASE("collision distances") {
  for (int k = 1; k <= 3; ++k)
    CHECK(collision_distance(collision_shape_point(k), k) ==
          doctest::Approx(0.0).epsilon(1e-12));

  // Lagrange point: all sides 1, rho = asin(1/sqrt(2)) = pi/4
  CHECK(collision_distance(ShapePoint{kPi / 2, 0.0}, 2) ==
        doctest::Approx(kPi / 4).epsilon(1e-14));

  // antipodal equator point of collision 1: s1 = 2, maximal distance pi/2
  CHECK(collision_distance(ShapePoint{0.0, kPi}, 1) ==
        doctest::Approx(kPi / 2).epsilon(1e-12));
}

TEST_CASE("collision distance agrees with the embedded great-circle distance") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> uphi(-kPi / 2, kPi / 2);
  std::uniform_real_distribution<double> uth(0.0, 2.0 * kPi);
  for (int it = 0; it < 300; ++it) {
    const ShapePoint p{uphi(rng), uth(rng)};
    const Eigen::Vector3d x = unit_vector(p);
    for (int k = 1; k <= 3; ++k) {
      const Eigen::Vector3d c = collision_axis(k);
      // great-circle distance on the radius-1/2 sphere
      const double d = 0.5 * std::atan2(x.cross(c).norm(), x.dot(c));
      CHECK(collision_distance(p, k) == doctest::Approx(d).epsilon(1e-10));
    }
  }
}

TEST_CASE("embedding round trip") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> uphi(-kPi / 2 + 1e-6, kPi / 2 - 1e-6);
  std::uniform_real_distribution<double> uth(0.0, 2.0 * kPi);
  for (int it = 0; it < 100; ++it) {
    const ShapePoint p{uphi(rng), uth(rng)};
    const ShapePoint q = shape_point_from_unit(unit_vector(p));
    CHECK(q.phi == doctest::Approx(p.phi).epsilon(1e-13));
    CHECK(std::abs(std::remainder(q.theta - p.theta, 2.0 * kPi)) < 1e-12);
    const SideTriple a = squared_sides(p);
    const SideTriple b = squared_sides(unit_vector(p));
    for (int k = 1; k <= 3; ++k) CHECK(a[k] == doctest::Approx(b[k]).epsilon(1e-13));
  }
}

TEST_CASE("equator arc letters") {
  CHECK(equator_arc_letter(kPi) == 1);
  // s(0, pi/3) = (1/2, 2, 1/2): body 2 sits between 1 and 3
  CHECK(equator_arc_letter(kPi / 3) == 2);
  CHECK(equator_arc_letter(kPi + 1e-6) == 1);
  CHECK(equator_arc_letter(5.0 * kPi / 3) == 3);
}

TEST_CASE("mass triple invariants") {
  const MassTriple unit(1, 1, 1);
  CHECK(unit.d_m() == doctest::Approx(1.0).epsilon(1e-15));
  for (int k = 1; k <= 3; ++k)
    CHECK(unit.cyl_radius(k) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));

  const MassTriple m(0.3, 1.7, 2.2);
  CHECK(m.d_m() > 0.0);
  for (int k = 1; k <= 3; ++k) CHECK(m.cyl_radius(k) > 0.0);
  CHECK(m.mu(1, 2) == doctest::Approx(0.3 * 1.7 / 2.0).epsilon(1e-15));
  CHECK_THROWS_AS(MassTriple(0.0, 1.0, 1.0), std::invalid_argument);

  const MassTriple r = masses_from_products(1.0, 1.0, 2.0);
  CHECK(r.p(1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.p(2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(r.p(3) == doctest::Approx(2.0).epsilon(1e-14));
}
