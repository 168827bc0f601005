#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "pants/metric.hpp"

using namespace pants;

namespace {

constexpr double kPi = 3.14159265358979323846264338328;

ShapePoint random_point(std::mt19937_64& rng, double min_rho_collision,
                        double min_pole_dist) {
  std::uniform_real_distribution<double> uphi(-kPi / 2, kPi / 2);
  std::uniform_real_distribution<double> uth(0.0, 2.0 * kPi);
  for (;;) {
    const ShapePoint p{uphi(rng), uth(rng)};
    if (min_collision_distance(p) < min_rho_collision) continue;
    if (kPi / 2 - std::abs(p.phi) < min_pole_dist) continue;
    return p;
  }
}

MassTriple random_masses(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> um(0.2, 3.0);
  return MassTriple(um(rng), um(rng), um(rng));
}

// equal-mass closed form -K U^3 = 3 sum' 1/(s_i^2 s_j^2) - 2 U^2, kept as an
// independent cross-check of the general-mass code path
double curvature_equal_mass_route(const SideTriple& s) {
  const double U = 1.0 / s.s1 + 1.0 / s.s2 + 1.0 / s.s3;
  auto sq = [](double x) { return x * x; };
  const double A = 2.0 * (1.0 / (sq(s.s1) * sq(s.s2)) + 1.0 / (sq(s.s1) * sq(s.s3)) +
                          1.0 / (sq(s.s2) * sq(s.s3)));
  return -(3.0 * A - 2.0 * U * U) / (U * U * U);
}

}  // namespace

TEST_CASE("conformal factor reference values") {
  const MassTriple unit(1, 1, 1);
  CHECK(conformal_factor(ShapePoint{kPi / 2, 0.0}, unit) ==
        doctest::Approx(3.0).epsilon(1e-14));
  CHECK(conformal_factor(ShapePoint{0.0, kPi}, unit) ==
        doctest::Approx(4.5).epsilon(1e-14));

  // m = (1,1,2) at the Lagrange shape: Uhat = 5, d(m)^2 = 3/2, I = 5/4,
  // so F = d(m)^2 Uhat / I = 6. (Checked independently by the cylinder
  // limits and the finite-difference curvature oracle below.)
  const MassTriple m112(1, 1, 2);
  CHECK(conformal_factor(ShapePoint{kPi / 2, 0.0}, m112) ==
        doctest::Approx(6.0).epsilon(1e-14));

  // equal masses: F reduces to the plain potential everywhere
  std::mt19937_64 rng(3);
  for (int it = 0; it < 100; ++it) {
    const ShapePoint p = random_point(rng, 0.02, 0.0);
    CHECK(conformal_factor(p, unit) ==
          doctest::Approx(potential(p, unit)).epsilon(1e-13));
  }
  CHECK_THROWS_AS(conformal_factor(ShapePoint{0.0, 0.0}, unit), CollisionSingularity);
}

TEST_CASE("curvature closed form at reference points") {
  const MassTriple unit(1, 1, 1);
  CHECK(std::abs(curvature_closed_form(ShapePoint{kPi / 2, 0.7}, unit)) < 1e-13);
  CHECK(curvature_closed_form(ShapePoint{0.0, kPi}, unit) ==
        doctest::Approx(-20.0 / 27.0).epsilon(1e-12));

  // the curvature vanishes at the Lagrange shape for every mass choice
  std::mt19937_64 rng(17);
  for (int it = 0; it < 50; ++it) {
    const MassTriple m = random_masses(rng);
    CHECK(std::abs(curvature_closed_form(ShapePoint{kPi / 2, 0.0}, m)) < 1e-12);
    CHECK(std::abs(kappa(ShapePoint{kPi / 2, 0.0}, m)) < 1e-12);
  }
}

TEST_CASE("general formula reduces to the equal-mass route") {
  const MassTriple unit(1, 1, 1);
  std::mt19937_64 rng(29);
  for (int it = 0; it < 300; ++it) {
    const ShapePoint p = random_point(rng, 0.02, 0.0);
    const SideTriple s = squared_sides(p);
    CHECK(curvature_closed_form(p, unit) ==
          doctest::Approx(curvature_equal_mass_route(s)).epsilon(1e-12));
  }
}

TEST_CASE("kappa sign governs the curvature sign") {
  const MassTriple unit(1, 1, 1);
  CHECK(kappa(ShapePoint{0.0, kPi}, unit) > 0.0);

  std::mt19937_64 rng(31);
  for (int it = 0; it < 500; ++it) {
    const MassTriple m = random_masses(rng);
    const ShapePoint p = random_point(rng, 0.02, 0.0);
    const double K = curvature_closed_form(p, m);
    const double kap = kappa(p, m);
    if (std::abs(K) > 1e-12) CHECK(K * kap < 0.0);
  }
}

TEST_CASE("kappa changes sign on a small circle around the Lagrange point") {
  // products p = (1,1,2): dkappa is nonzero, so both signs appear nearby
  const MassTriple m = masses_from_products(1.0, 1.0, 2.0);
  bool pos = false, neg = false;
  const double d = 5e-3;
  for (int j = 0; j < 256; ++j) {
    const double th = j * 2.0 * kPi / 256;
    const ShapePoint p{kPi / 2 - d, th};
    const double kap = kappa(p, m);
    pos = pos || kap > 0.0;
    neg = neg || kap < 0.0;
  }
  CHECK(pos);
  CHECK(neg);
}

TEST_CASE("dkappa at the Lagrange point") {
  const auto eq = dkappa_lagrange_products(1.0, 1.0, 1.0);
  CHECK(eq.v[0] == doctest::Approx(2.0));
  CHECK(eq.v[1] == doctest::Approx(2.0));
  CHECK(eq.v[2] == doctest::Approx(2.0));
  CHECK(eq.degenerate);

  const auto a2 = dkappa_lagrange_products(1.0, 1.0, 2.0);
  CHECK(a2.v[0] == doctest::Approx(5.0));
  CHECK(a2.v[1] == doctest::Approx(5.0));
  CHECK(a2.v[2] == doctest::Approx(4.0));
  CHECK_FALSE(a2.degenerate);

  const auto g = dkappa_lagrange_products(1.0, 2.0, 3.0);
  CHECK(g.v[0] == doctest::Approx(13.0));
  CHECK(g.v[1] == doctest::Approx(20.0));
  CHECK(g.v[2] == doctest::Approx(15.0));
  CHECK_FALSE(g.degenerate);

  // MassTriple entry point matches the product form
  const MassTriple m112(1, 1, 2);  // p = (2, 2, 1)
  const auto r = dkappa_lagrange(m112);
  CHECK(r.v[0] == doctest::Approx(2.0 * (4.0 + 1.0)));
  CHECK(r.v[2] == doctest::Approx(1.0 * (4.0 + 4.0)));
}

TEST_CASE("finite-difference curvature oracle") {
  const MassTriple unit(1, 1, 1);
  const ShapePoint euler{0.0, kPi};
  CHECK(curvature_fd_oracle(euler, unit, 1e-4) ==
        doctest::Approx(-20.0 / 27.0).epsilon(1e-5));

  // near the Lagrange point the curvature is nonpositive within oracle error
  CHECK(curvature_fd_oracle(ShapePoint{kPi / 2 - 1e-3, 0.4}, unit, 1e-4) < 1e-8);

  CHECK_THROWS_AS(curvature_fd_oracle(euler, unit, 2e-2), StepTooLarge);
  CHECK_THROWS_AS(curvature_fd_oracle(ShapePoint{0.0, 1e-4}, unit, 1e-4),
                  CollisionSingularity);
}

TEST_CASE("oracle equivalence on random points and masses") {
  // Pole margin 0.3: the (4/c^2) theta stencil amplifies rounding noise as
  // the chart degenerates; the poles are checked separately by radial limits.
  std::mt19937_64 rng(41);
  for (int mt = 0; mt < 5; ++mt) {
    const MassTriple m = random_masses(rng);
    for (int it = 0; it < 200; ++it) {
      const ShapePoint p = random_point(rng, 0.05, 0.3);
      const double s_min = squared_sides(p).min();
      const double h = std::clamp(2e-3 * s_min, 1e-6, 1e-4);
      const double cf = curvature_closed_form(p, m);
      const double fd = curvature_fd_oracle(p, m, h);
      CHECK(std::abs(fd - cf) <= 1e-5 * std::max(1.0, std::abs(cf)));
    }
  }
}

TEST_CASE("Laplacian and gradient oracles") {
  const MassTriple unit(1, 1, 1);
  const ShapePoint euler{0.0, kPi};
  // Delta U = 8 U_4 with U_4 = 8.25 at the Euler point
  CHECK(laplacian_U_oracle(euler, unit, 1e-4) == doctest::Approx(66.0).epsilon(2e-6));
  // the Lagrange point is a critical point of U
  CHECK(std::abs(gradsq_U_oracle(ShapePoint{kPi / 2 - 1e-3, 0.9}, unit, 1e-4)) < 1e-4);

  std::mt19937_64 rng(43);
  for (int mt = 0; mt < 5; ++mt) {
    const MassTriple m = random_masses(rng);
    for (int it = 0; it < 200; ++it) {
      const ShapePoint p = random_point(rng, 0.05, 0.3);
      const SideTriple s = squared_sides(p);
      // Richardson-extrapolated centered stencils: the h^2 term cancels and
      // the remaining error clears 1e-5 across the sampled region
      const double h = std::clamp(5e-3 * s.min(), 1e-6, 5e-4);
      const double lap_fd = (4.0 * laplacian_U_oracle(p, m, 0.5 * h) -
                             laplacian_U_oracle(p, m, h)) / 3.0;
      const double lap_cf = 8.0 * power_sum(s, m, 2);
      CHECK(std::abs(lap_fd - lap_cf) <= 1e-5 * std::max(1.0, std::abs(lap_cf)));
      const double g_fd = (4.0 * gradsq_U_oracle(p, m, 0.5 * h) -
                           gradsq_U_oracle(p, m, h)) / 3.0;
      const double g_cf = grad_sq_closed(s, m);
      CHECK(std::abs(g_fd - g_cf) <= 1e-5 * std::max(1.0, std::abs(g_cf)));
    }
  }
}

TEST_CASE("chart partials match finite differences") {
  std::mt19937_64 rng(47);
  for (int it = 0; it < 100; ++it) {
    const MassTriple m = random_masses(rng);
    const ShapePoint p = random_point(rng, 0.05, 0.05);
    const ChartPartials cp = conformal_partials(p, m);
    const double h = 1e-6;
    const double fphi = (conformal_factor(ShapePoint{p.phi + h, p.theta}, m) -
                         conformal_factor(ShapePoint{p.phi - h, p.theta}, m)) /
                        (2.0 * h);
    const double fth = (conformal_factor(ShapePoint{p.phi, p.theta + h}, m) -
                        conformal_factor(ShapePoint{p.phi, p.theta - h}, m)) /
                       (2.0 * h);
    CHECK(cp.F == doctest::Approx(conformal_factor(p, m)).epsilon(1e-13));
    CHECK(cp.F_phi == doctest::Approx(fphi).epsilon(5e-7));
    CHECK(cp.F_theta == doctest::Approx(fth).epsilon(5e-7));
  }
}

TEST_CASE("end chart basics") {
  const MassTriple unit(1, 1, 1);
  // ell vanishes at the reference radius
  CHECK(std::abs(end_ell(3, kEndReferenceRadius, 1.0, unit)) < 1e-14);

  // polar coordinates round trip
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> urho(1e-3, 0.7);
  std::uniform_real_distribution<double> uchi(0.0, 2.0 * kPi);
  for (int it = 0; it < 100; ++it) {
    const double rho = urho(rng), chi = uchi(rng);
    for (int k = 1; k <= 3; ++k) {
      const ShapePoint p = end_polar_point(k, rho, chi);
      double r2, c2;
      end_polar_coords(p, k, &r2, &c2);
      CHECK(r2 == doctest::Approx(rho).epsilon(1e-10));
      CHECK(std::abs(std::remainder(c2 - chi, 2.0 * kPi)) < 1e-9);
      // rho is the collision distance
      CHECK(collision_distance(p, k) == doctest::Approx(rho).epsilon(1e-10));
    }
  }

  // the opposite equatorial arc is out of the chart
  CHECK_FALSE(in_end_chart(ShapePoint{0.0, collision_angle(3) + kPi}, 3));
  CHECK_THROWS_AS(end_chart(ShapePoint{0.0, collision_angle(3) + kPi}, unit, 3),
                  OutOfChart);
  CHECK(in_end_chart(ShapePoint{0.0, collision_angle(3) + 0.2}, 3));
}

TEST_CASE("cylinder limits of the circumferential factor") {
  const MassTriple unit(1, 1, 1);
  // equal masses: f -> 1/sqrt(2) at every angle
  const double rho_small = 2e-3;
  for (int j = 0; j < 16; ++j) {
    const double chi = 0.1 + j * 2.0 * kPi / 16;
    const double f = end_f(3, rho_small, chi, unit);
    CHECK(f == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(2e-5));
  }

  // m = (1,1,2), end 3 (the 12 pair): K_12 = sqrt(mu_12 m1 m2) = 1/sqrt(2)
  const MassTriple m112(1, 1, 2);
  CHECK(m112.cyl_radius(3) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
  CHECK(end_f(3, 1e-3, 0.7, m112) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-5));
  // end 1 (the 23 pair) approaches its limit only linearly in rho since
  // sum p_i s_i is not constant along this end; probe closer in
  CHECK(end_f(1, 1e-5, 0.7, m112) ==
        doctest::Approx(m112.cyl_radius(1)).epsilon(1e-5));

  // f decreases monotonically toward the collision once rho is small
  for (int j = 0; j < 8; ++j) {
    const double chi = 0.05 + j * 2.0 * kPi / 8;
    double prev = end_f(3, 0.2, chi, unit);
    for (double rho = 0.1; rho > 1e-4; rho *= 0.5) {
      const double f = end_f(3, rho, chi, unit);
      CHECK(f < prev);
      prev = f;
    }
  }
}

TEST_CASE("JM length to collision diverges with the cylinder-radius slope") {
  std::mt19937_64 rng(59);
  for (int mt = 0; mt < 3; ++mt) {
    const MassTriple m = mt == 0 ? MassTriple(1, 1, 1) : random_masses(rng);
    for (int k = 1; k <= 3; ++k) {
      const double chi = 1.1;
      // ell(rho) ~ -C log(rho) + const; fit the slope over a decade
      const double r1 = 1e-4, r2 = 1e-5;
      const double l1 = end_ell(k, r1, chi, m);
      const double l2 = end_ell(k, r2, chi, m);
      const double slope = (l2 - l1) / (std::log(r1) - std::log(r2));
      CHECK(slope == doctest::Approx(m.cyl_radius(k)).epsilon(0.02));
    }
  }
}

TEST_CASE("rho_for_ell inverts end_ell") {
  const MassTriple unit(1, 1, 1);
  for (double ell : {0.5, 1.0, 2.0, 4.0}) {
    const double rho = rho_for_ell(3, ell, 0.5 * kPi, unit);
    CHECK(end_ell(3, rho, 0.5 * kPi, unit) == doctest::Approx(ell).epsilon(1e-8));
  }
}

TEST_CASE("curvature scan equal masses is nonpositive") {
  const MassTriple unit(1, 1, 1);
  ScanOptions opt;
  opt.n_phi = 200;
  opt.n_theta = 200;
  opt.exclusion = 0.05;
  const ScanReport rep = curvature_scan(unit, opt);
  CHECK(rep.verdict == ScanVerdict::AllNonpositive);
  CHECK(rep.max_curvature <= 1e-9);
  CHECK(rep.min_curvature < -0.5);  // strongly negative near the collision balls
  CHECK(rep.samples > 30000);

  // near-equal masses stay nonpositive at grid tolerance
  const MassTriple eps_mass(1.0, 1.0, 1.0 + 1e-12);
  const ScanReport rep2 = curvature_scan(eps_mass, opt);
  CHECK(rep2.verdict == ScanVerdict::AllNonpositive);
}

TEST_CASE("curvature scan near the Lagrange point shows both signs for p=(1,1,2)") {
  const MassTriple m = masses_from_products(1.0, 1.0, 2.0);
  ScanOptions opt;
  opt.n_phi = 120;
  opt.n_theta = 240;
  opt.phi_min = kPi / 2 - 1e-2;
  opt.phi_max = kPi / 2 - 1e-5;
  opt.include_poles = false;
  opt.positive_eps = 1e-15;
  const ScanReport rep = curvature_scan(m, opt);
  CHECK(rep.verdict == ScanVerdict::MixedSign);
  CHECK(rep.max_curvature > 0.0);
  CHECK(rep.min_curvature < 0.0);
  CHECK_FALSE(rep.sign_changes.empty());
}

TEST_CASE("scan validates the grid resolution") {
  ScanOptions opt;
  opt.n_phi = 1;
  CHECK_THROWS_AS(curvature_scan(MassTriple(1, 1, 1), opt), std::invalid_argument);
}
