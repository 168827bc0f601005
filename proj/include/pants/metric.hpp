#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "pants/shape.hpp"

namespace pants {

// Reference radius for the end coordinate ell (the integration constant of
// the radial quadrature is fixed by ell(rho_ref) = 0).
inline constexpr double kEndReferenceRadius = 0.39269908169872415481;  // pi/8

// One evaluation of the Jacobi-Maupertuis metric data at a shape point.
// conformal_factor is the factor multiplying the round ds1^2; curvature is
// the Gaussian curvature K of the JM metric; kappa governs its sign
// (sign(K) = -sign(kappa)).
struct MetricSample {
  ShapePoint point;
  double conformal_factor = 0.0;
  double curvature = 0.0;
  double kappa = 0.0;
};

// Cylindrical coordinates of a collision end. ell increases toward the
// collision and vanishes at the reference radius; chi is the polar angle
// about the collision point; f_value is the circumferential metric factor,
// which decreases to cyl_radius(k) as ell -> infinity.
struct EndChart {
  int k = 0;
  double ell = 0.0;
  double chi = 0.0;
  double f_value = 0.0;
};

// Mass-normalization factor Lambda_m = d(m) * (sum s_i / 3) / (sum p_i s_i / M),
// the conformal factor relating the mass shape metric to the round ds1^2.
double mass_conformal(const SideTriple& s, const MassTriple& m);

// Conformal factor F of the JM metric with respect to ds1^2:
// F = d(m) * Uhat * Lambda_m with Uhat = sum p_i / s_i. Reduces to the plain
// potential for equal unit masses.
double conformal_factor(const SideTriple& s, const MassTriple& m,
                        double min_side = kDefaultSideExclusion);
double conformal_factor(const ShapePoint& p, const MassTriple& m,
                        double min_side = kDefaultSideExclusion);

// Gaussian curvature of the JM metric in closed form:
//   -Uhat^2 F K = 3 { sum' p_i p_j / (s_i^2 s_j^2)
//                     - sum' p_i p_j (sum p_i/s_i)^2 / (sum p_i s_i)^2 }
// with sum' running over ordered pairs i != j. For equal unit masses this
// reduces to -K U^3 = 3 sum' 1/(s_i^2 s_j^2) - 2 U^2.
double curvature_closed_form(const SideTriple& s, const MassTriple& m,
                             double min_side = kDefaultSideExclusion);
double curvature_closed_form(const ShapePoint& p, const MassTriple& m,
                             double min_side = kDefaultSideExclusion);

// kappa = sqrt(sum' p_i p_j / s_i^2 s_j^2) (sum p_i s_i)/(sum p_i/s_i)
//         - sqrt(sum' p_i p_j); vanishes exactly where the curvature does.
double kappa(const SideTriple& s, const MassTriple& m,
             double min_side = kDefaultSideExclusion);
double kappa(const ShapePoint& p, const MassTriple& m,
             double min_side = kDefaultSideExclusion);

MetricSample metric_sample(const ShapePoint& p, const MassTriple& m,
                           double min_side = kDefaultSideExclusion);

// Direction of steepest growth of log F, as an ambient (tangent-projected)
// gradient at a unit-sphere point; used by the geodesic equations.
Eigen::Vector3d grad_log_conformal(const Eigen::Vector3d& x, const MassTriple& m,
                                   double min_side = kDefaultSideExclusion);

// F together with its chart partials dF/dphi, dF/dtheta (analytic).
struct ChartPartials {
  double F;
  double F_phi;
  double F_theta;
};
ChartPartials conformal_partials(const ShapePoint& p, const MassTriple& m,
                                 double min_side = kDefaultSideExclusion);

// Coefficient vector of d(kappa) at the Lagrange point modulo sum(ds_i):
// (p1(p2^2+p3^2), p2(p1^2+p3^2), p3(p1^2+p2^2)). The sign-change test is
// inconclusive exactly when all three components coincide.
struct DkappaReport {
  std::array<double, 3> v{};
  bool degenerate = false;
};
DkappaReport dkappa_lagrange(const MassTriple& m);
DkappaReport dkappa_lagrange_products(double p1, double p2, double p3);

// --- finite-difference oracles (round-metric Laplacian, centered stencils) ---

// K = (4 - (1/2) Laplacian(log F)) / F via centered differences.
double curvature_fd_oracle(const ShapePoint& p, const MassTriple& m, double h);

// Finite-difference Laplacian of Uhat; must equal 8 sum(p_i / s_i^2).
double laplacian_U_oracle(const ShapePoint& p, const MassTriple& m, double h);

// Finite-difference squared gradient norm of Uhat (covector norm
// 4(a^2 + b^2/c^2)); must equal grad_sq_closed.
double gradsq_U_oracle(const ShapePoint& p, const MassTriple& m, double h);

// Closed form 4S for |grad Uhat|^2, assembled from the weighted identities.
double grad_sq_closed(const SideTriple& s, const MassTriple& m,
                      double min_side = kDefaultSideExclusion);

// --- cylindrical end coordinates ---

// Polar coordinates about collision point k on the round sphere: rho is the
// radius-1/2 spherical distance, chi the angle measured from the eastward
// equator direction (chi = pi/2 points to the north pole).
void end_polar_coords(const ShapePoint& p, int k, double* rho, double* chi);
ShapePoint end_polar_point(int k, double rho, double chi);

// Chart domain of end k: everything except the opposite equatorial arc
// (the syzygy-k arc), its bounding collision points, and the base collision.
bool in_end_chart(const ShapePoint& p, int k);

// ell(rho, chi) = integral_rho^rho_ref sqrt(F) d(rho') along the radial line.
double end_ell(int k, double rho, double chi, const MassTriple& m,
               double quad_tol = 1e-10);
// Circumferential factor f = sqrt(F) * (1/2) sin(2 rho).
double end_f(int k, double rho, double chi, const MassTriple& m);
// Invert ell(rho, chi) = ell for rho by bisection.
double rho_for_ell(int k, double ell, double chi, const MassTriple& m);

EndChart end_chart(const ShapePoint& p, const MassTriple& m, int k);

// --- curvature scans ---

struct ScanOptions {
  int n_phi = 1000;
  int n_theta = 1000;
  double exclusion = 0.05;    // spherical radius of excluded collision balls
  double positive_eps = 1e-9; // curvature above this counts as positive
  // Optional window (defaults to the full sphere).
  double phi_min = -1.5707963267948966;
  double phi_max = 1.5707963267948966;
  double theta_min = 0.0;
  double theta_max = 6.283185307179586;
  bool include_poles = true;
  std::size_t max_sign_changes = 64;
};

struct ScanRow {
  double phi, theta, s1, s2, s3, conformal, curvature, kappa;
};

enum class ScanVerdict { AllNonpositive, MixedSign };

struct ScanReport {
  double min_curvature = 0.0;
  double max_curvature = 0.0;
  ShapePoint min_at{};
  ShapePoint max_at{};
  std::vector<ShapePoint> sign_changes;  // midpoints of sign-flipping cells
  ScanVerdict verdict = ScanVerdict::AllNonpositive;
  std::size_t samples = 0;
  std::size_t excluded = 0;
};

// Scan the closed-form curvature over a (phi, theta) grid, excluding the
// collision balls. If rows != nullptr every row_stride-th sample is appended.
ScanReport curvature_scan(const MassTriple& m, const ScanOptions& opt,
                          std::vector<ScanRow>* rows = nullptr,
                          int row_stride = 1);

}  // namespace pants
