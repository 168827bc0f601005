#pragma once

#include <optional>
#include <vector>

#include <Eigen/Core>

#include "pants/metric.hpp"
#include "pants/shape.hpp"

namespace pants {

// Phase point of the JM geodesic flow: chart coordinates plus coordinate
// velocities per unit JM arclength, and the accumulated arclength s.
// Unit speed means F * (1/4)(v_phi^2 + cos^2(phi) v_theta^2) = 1.
struct GeodesicState {
  ShapePoint point;
  double v_phi = 0.0;
  double v_theta = 0.0;
  double s = 0.0;
};

struct SyzygyEvent {
  double s_at = 0.0;
  double theta_at = 0.0;
  int letter = 0;
  int sign = 0;  // +1: upper -> lower crossing; -1: lower -> upper
};

enum class Fate { Running, EnteredEnd, LeftDomain };

struct Trajectory {
  std::vector<GeodesicState> samples;
  std::vector<double> newton_time;     // per sample, dt = ds / (sqrt(2) F)
  std::vector<SyzygyEvent> events;
  std::vector<GeodesicState> event_states;
  Fate fate = Fate::Running;
  int end_k = 0;                       // which end, when fate == EnteredEnd
  double total_arclength = 0.0;
  double max_speed_drift = 0.0;        // max |speed - 1| seen before renormalization
  double drift_per_unit = 0.0;         // accumulated corrections / arclength
};

struct IntegrateOptions {
  double tol = 1e-10;
  double max_step = 0.05;
  double min_step = 1e-14;
  double stop_side = 1e-6;   // stop and report EnteredEnd when a side drops below
  double sample_ds = 0.01;   // approximate output sample spacing (0 = every step)
  std::size_t max_steps = 2'000'000;
};

// Chart form of the geodesic equations with analytic partials of F.
// Throws PoleSingularity when cos(phi) is too small for the chart and
// CollisionSingularity near the punctures. dstate is (phi', theta',
// v_phi', v_theta') with respect to arclength.
struct StateDerivative {
  double d_phi, d_theta, d_v_phi, d_v_theta;
};
StateDerivative geodesic_rhs(const GeodesicState& state, const MassTriple& m);

// Embedding form used internally by the integrator: y = (X, V) in R^6 with
// |X| = 1, X.V = 0.
Eigen::Matrix<double, 6, 1> embed_state(const GeodesicState& s);
GeodesicState chart_state(const Eigen::Matrix<double, 6, 1>& y, double s);

// Adaptive integration to arclength s_max, or until the trajectory enters a
// collision ball. Syzygy crossings are located to |phi| < 1e-10 and recorded
// with alternating signs.
Trajectory integrate(const GeodesicState& start, const MassTriple& m, double s_max,
                     const IntegrateOptions& opt = {});

// Syzygy letter of an equatorial crossing: the index of the largest side.
// Throws AtCollision within the exclusion ball of a collision point.
int classify_crossing(double theta, double exclusion_rho = rho_exclusion());

// Heuristic end detection: reports end k when the ell coordinate of end k
// increased monotonically over the trailing window and exceeds the threshold.
std::optional<int> detect_end_approach(const Trajectory& traj, const MassTriple& m,
                                       double window, double ell_threshold = 1.0);

// Build a unit-JM-speed state from a chart direction (d_phi, d_theta).
GeodesicState unit_speed_state(const ShapePoint& p, double d_phi, double d_theta,
                               const MassTriple& m);

// JM speed of a state (should be 1 for unit-speed states).
double jm_speed(const GeodesicState& s, const MassTriple& m);

}  // namespace pants
