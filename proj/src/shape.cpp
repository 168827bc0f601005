#include "pants/shape.hpp"

#include <algorithm>
#include <cmath>

namespace pants {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kThird = 2.0943951023931954923084289221863;  // 2 pi / 3

void check_letter(int k, const char* who) {
  if (k < 1 || k > 3) throw std::invalid_argument(std::string(who) + ": letter must be 1, 2 or 3");
}
}  // namespace

Gamma gamma(int k, double theta) {
  check_letter(k, "gamma");
  const double a = theta + (k - 1) * kThird;
  return {std::cos(a), -std::sin(a)};
}

double collision_angle(int k) {
  check_letter(k, "collision_angle");
  // gamma_k = 1 at theta = -(k-1) 2pi/3 (mod 2pi): 0, 4pi/3, 2pi/3.
  const double t = std::fmod(kTwoPi - (k - 1) * kThird, kTwoPi);
  return t;
}

ShapePoint collision_shape_point(int k) { return {0.0, collision_angle(k)}; }

SideTriple squared_sides(const ShapePoint& p) {
  const double c = std::cos(p.phi);
  return {1.0 - c * gamma(1, p.theta).value, 1.0 - c * gamma(2, p.theta).value,
          1.0 - c * gamma(3, p.theta).value};
}

double collision_distance(const SideTriple& s, int k) {
  check_letter(k, "collision_distance");
  const double v = std::sqrt(std::clamp(0.5 * s[k], 0.0, 1.0));
  return std::asin(v);
}

double collision_distance(const ShapePoint& p, int k) {
  return collision_distance(squared_sides(p), k);
}

double min_collision_distance(const ShapePoint& p) {
  const SideTriple s = squared_sides(p);
  return collision_distance(s, s.argmin());
}

double potential(const SideTriple& s, const MassTriple& m, double min_side) {
  double u = 0.0;
  for (int k = 1; k <= 3; ++k) {
    if (s[k] < min_side)
      throw CollisionSingularity("potential: side " + std::to_string(k) +
                                 " below exclusion radius");
    u += m.p(k) / s[k];
  }
  return u;
}

double potential(const ShapePoint& p, const MassTriple& m, double min_side) {
  return potential(squared_sides(p), m, min_side);
}

double power_sum(const SideTriple& s, const MassTriple& m, int n, double min_side) {
  if (n < 1) throw std::invalid_argument("power_sum: n must be >= 1");
  double u = 0.0;
  for (int k = 1; k <= 3; ++k) {
    if (s[k] < min_side)
      throw CollisionSingularity("power_sum: side " + std::to_string(k) +
                                 " below exclusion radius");
    u += m.p(k) / std::pow(s[k], n);
  }
  return u;
}

double power_sum(const ShapePoint& p, const MassTriple& m, int n, double min_side) {
  return power_sum(squared_sides(p), m, n, min_side);
}

int equator_arc_letter(double theta) {
  return squared_sides(ShapePoint{0.0, theta}).argmax();
}

Eigen::Vector3d unit_vector(const ShapePoint& p) {
  const double c = std::cos(p.phi);
  return {c * std::cos(p.theta), c * std::sin(p.theta), std::sin(p.phi)};
}

ShapePoint shape_point_from_unit(const Eigen::Vector3d& x) {
  const double z = std::clamp(x.z(), -1.0, 1.0);
  double theta = std::atan2(x.y(), x.x());
  if (theta < 0.0) theta += kTwoPi;
  return {std::asin(z), theta};
}

Eigen::Vector3d collision_axis(int k) {
  const double t = collision_angle(k);
  return {std::cos(t), std::sin(t), 0.0};
}

SideTriple squared_sides(const Eigen::Vector3d& x) {
  return {1.0 - x.dot(collision_axis(1)), 1.0 - x.dot(collision_axis(2)),
          1.0 - x.dot(collision_axis(3))};
}

}  // namespace pants
