#pragma once

#include <Eigen/Core>

#include "pants/errors.hpp"
#include "pants/masses.hpp"

namespace pants {

// Sides below this are treated as "at collision"; see also rho_exclusion().
inline constexpr double kDefaultSideExclusion = 1e-10;

// A point of the shape sphere in the (phi, theta) chart of the round
// radius-1/2 metric ds1^2 = (1/4)(dphi^2 + cos^2(phi) dtheta^2).
// phi is the colatitude measured from the equator of collinear shapes,
// theta the longitude. The three binary collision points sit on the
// equator at theta = 0, 4pi/3, 2pi/3 (for k = 1, 2, 3).
struct ShapePoint {
  double phi = 0.0;
  double theta = 0.0;
};

// Normalized squared side lengths s_k = r_ij^2 / I1 with sum fixed to 3.
// s_k -> 0 means the pair NOT containing body k collides.
struct SideTriple {
  double s1 = 1.0, s2 = 1.0, s3 = 1.0;

  double operator[](int k) const {
    switch (k) {
      case 1: return s1;
      case 2: return s2;
      case 3: return s3;
    }
    throw std::invalid_argument("SideTriple: index must be 1, 2 or 3");
  }
  double min() const { return std::min(s1, std::min(s2, s3)); }
  int argmin() const { return s1 <= s2 ? (s1 <= s3 ? 1 : 3) : (s2 <= s3 ? 2 : 3); }
  int argmax() const { return s1 >= s2 ? (s1 >= s3 ? 1 : 3) : (s2 >= s3 ? 2 : 3); }
  double sum() const { return s1 + s2 + s3; }
};

struct Gamma {
  double value;  // gamma_k(theta)
  double deriv;  // d gamma_k / d theta
};

// gamma_k(theta) = cos(theta + (k-1) 2pi/3). The three plane vectors
// (gamma_k, gamma_k') are the vertices of an equilateral triangle
// inscribed in the unit circle.
Gamma gamma(int k, double theta);

// Longitude of collision point k on the equator.
double collision_angle(int k);
ShapePoint collision_shape_point(int k);

// s_k(phi, theta) = 1 - cos(phi) gamma_k(theta).
SideTriple squared_sides(const ShapePoint& p);

// Spherical distance (radius-1/2 round metric) from p to collision point k:
// rho_k = asin(sqrt(s_k / 2)).
double collision_distance(const ShapePoint& p, int k);
double collision_distance(const SideTriple& s, int k);
double min_collision_distance(const ShapePoint& p);

// rho below which a point counts as "at collision" for a given side exclusion.
inline double rho_exclusion(double min_side = kDefaultSideExclusion) {
  return std::asin(std::sqrt(0.5 * min_side));
}

// Mass-weighted potential sum(p_k / s_k). Equals U_2 for equal unit masses.
double potential(const SideTriple& s, const MassTriple& m,
                 double min_side = kDefaultSideExclusion);
double potential(const ShapePoint& p, const MassTriple& m,
                 double min_side = kDefaultSideExclusion);

// sum(p_k / s_k^n); n = 2 is the weighted U_4 appearing in Delta U = 8 U_4.
double power_sum(const SideTriple& s, const MassTriple& m, int n,
                 double min_side = kDefaultSideExclusion);
double power_sum(const ShapePoint& p, const MassTriple& m, int n,
                 double min_side = kDefaultSideExclusion);

// Syzygy letter of an equatorial point: the index of the largest side,
// i.e. the body sitting between the other two.
int equator_arc_letter(double theta);

// Embedding of the chart on the unit two-sphere in R^3 (distances in the
// shape metric are half the unit-sphere ones).
Eigen::Vector3d unit_vector(const ShapePoint& p);
ShapePoint shape_point_from_unit(const Eigen::Vector3d& x);
// Unit vector of collision point k; s_k(x) = 1 - x . collision_axis(k).
Eigen::Vector3d collision_axis(int k);
SideTriple squared_sides(const Eigen::Vector3d& x);

}  // namespace pants
