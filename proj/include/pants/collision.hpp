#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Core>

#include "pants/masses.hpp"
#include "pants/shape.hpp"

namespace pants {

// Planar Jacobi-coordinate state of the unreduced problem:
// zeta1 = x1 - x2, zeta2 = x3 - (m1 x1 + m2 x2)/(m1 + m2).
struct FullState {
  Eigen::Vector2d zeta1 = Eigen::Vector2d::Zero();
  Eigen::Vector2d zeta2 = Eigen::Vector2d::Zero();
  Eigen::Vector2d zdot1 = Eigen::Vector2d::Zero();
  Eigen::Vector2d zdot2 = Eigen::Vector2d::Zero();

  double r() const { return zeta1.norm(); }
};

double mu1(const MassTriple& m);  // m1 m2 / (m1 + m2)
double mu2(const MassTriple& m);  // m3 (m1 + m2) / M

// Scalar angular momentum of the binary subsystem: J1 = zeta1 ^ zdot1.
double j1(const FullState& s);
// d J1 / dt = zeta1 ^ (1/mu1) dW/dzeta1 (the central term drops out).
double j1_rate(const FullState& s, const MassTriple& m);

double energy(const FullState& s, const MassTriple& m);            // Hamiltonian
double moment_of_inertia(const FullState& s, const MassTriple& m); // I
double moment_rate(const FullState& s, const MassTriple& m);       // dI/dt
double total_angular_momentum(const FullState& s, const MassTriple& m);
// Analytic second derivative of I (equals 4H identically along solutions).
double moment_second_rate(const FullState& s, const MassTriple& m);

// Interaction term W = m1 m3 / s2 + m2 m3 / s1 and the separations of the
// third body, expressed through the Jacobi substitution.
double interaction_W(const FullState& s, const MassTriple& m);

struct FullDerivative {
  Eigen::Vector2d dzeta1, dzeta2, dzdot1, dzdot2;
};
// Equations of motion for the -sum m_i m_j / r_ij^2 potential.
FullDerivative full_rhs(const FullState& s, const MassTriple& m);

// Cartesian positions (center-of-mass frame) and the acceleration
// cross-check route through pairwise forces.
void cartesian_positions(const FullState& s, const MassTriple& m,
                         Eigen::Vector2d x[3]);
FullState jacobi_from_cartesian(const Eigen::Vector2d x[3],
                                const Eigen::Vector2d v[3], const MassTriple& m);

enum class StopReason { TimeUp, Collision, Escape, StepFail };

struct FullSample {
  double t = 0.0;
  FullState state;
  double r = 0.0, J1 = 0.0, H = 0.0, I = 0.0, Iddot = 0.0;
};

struct FullTimeline {
  std::vector<FullSample> samples;
  StopReason stop = StopReason::TimeUp;
  double t_end = 0.0;
};

struct FullIntegrateOptions {
  double tol = 1e-12;
  double epsilon_stop = 1e-6;  // r below this counts as collision reached
  double escape_inertia = 1e4;
  double sample_dt = 0.0;  // 0: record every accepted step
  double max_step = 0.05;
  std::size_t max_steps = 5'000'000;
};

FullTimeline integrate_full(const FullState& start, const MassTriple& m, double t_max,
                            const FullIntegrateOptions& opt = {});

// Empirical constant in |dJ1/dt| <= C r fitted over a timeline.
struct DriftReport {
  double C = 0.0;          // max over samples of |J1_rate| / r
  double max_abs_rate = 0.0;
};
DriftReport j1_drift_bound(const FullTimeline& tl, const MassTriple& m);

struct CollisionPredicate {
  double J1_0 = 0.0;
  double r0 = 0.0;
  double delta = 1.0;
  double Kstar = 0.0;
};

// The open condition 2(m1 + m2) - J1_0^2 - Kstar r0 > delta^2.
bool open_condition(const CollisionPredicate& pred, const MassTriple& m);

// Calibrate Kstar by maximizing |r^2 rdot^2 + J1(0)^2 - 2(m1+m2)| / r(0)
// over sampled zero-energy, zero-angular-momentum infall states with
// r(0) < epsilon; returns twice the observed maximum.
double calibrate_Kstar(const MassTriple& m, double epsilon, int samples,
                       std::uint64_t seed = 12345);

struct BoundExperimentReport {
  bool collided = false;
  bool within_bound = false;
  bool rdot_inequality_held = false;  // delta <= -r rdot until the stop
  double t_collision = 0.0;
  double t_bound = 0.0;               // r(0)^2 / (2 delta)
  double min_neg_r_rdot = 0.0;        // min of -r rdot over the run
  bool passed() const { return collided && within_bound && rdot_inequality_held; }
};

// Integrate an infall state and check the collision-time bound
// t <= r(0)^2/(2 delta) together with the running inequality delta <= -r rdot.
BoundExperimentReport collision_bound_experiment(const FullState& start,
                                                 const MassTriple& m, double delta,
                                                 const FullIntegrateOptions& opt = {});

// Collinear zero-energy start on the invariant line manifold heading into the
// 12-collision: H = 0, J = 0, I = 1, Idot = 0, rdot < 0, r(0) = r0.
FullState collinear_infall_state(const MassTriple& m, double r0);

// Random H = 0, J = 0, I = 1 state with r(0) < epsilon and rdot(0) < 0.
FullState random_infall_state(const MassTriple& m, double epsilon,
                              std::mt19937_64& rng);

// Generic bounded-orbit initial condition: H = 0, J = 0, I = 1, Idot = 0 with
// prescribed shape; the velocity direction is a seeded random horizontal lift.
FullState full_state_from_shape(const ShapePoint& p, const MassTriple& m,
                                std::mt19937_64& rng);

// Shape-sphere projection using the side-length inversion; the hemisphere
// sign comes from the triangle's signed area.
ShapePoint project_to_shape(const FullState& s, const MassTriple& m);

}  // namespace pants
