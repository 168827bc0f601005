#pragma once

#include <vector>

#include "pants/geodesic.hpp"
#include "pants/words.hpp"

namespace pants {

// Closed polygonal loop on the shape sphere tracking a target free-homotopy
// class through its reduced syzygy word.
struct DiscreteLoop {
  std::vector<ShapePoint> vertices;  // cyclic
  SignedWord target_word;
};

struct RealizationResult {
  DiscreteLoop loop;
  double jm_length = 0.0;
  bool converged = false;
  double gradient_norm = 0.0;  // discrete first variation, or the shooting
                               // closure residual after the polish phase
  int iterations = 0;
};

// JM length of the polygonal loop: per-edge midpoint-rule quadrature of
// sqrt(F), refined until the stated relative stability.
double jm_length(const DiscreteLoop& loop, const MassTriple& m,
                 double rel_tol = 1e-8);

// Reduced cyclic signed syzygy word of the loop (equator crossings).
SignedWord loop_word(const DiscreteLoop& loop);

// Piecewise arc loop crossing the prescribed equatorial arcs with the
// prescribed signs, alternating hemispheres. Requires a tied, stutter-free,
// periodic word of even length; seed != 0 adds a reproducible jitter.
DiscreteLoop seed_loop(const SignedWord& word, const MassTriple& m,
                       int n_per_letter, unsigned seed = 0);

struct ShortenOptions {
  bool polish = true;           // single-shooting closure after the descent
  double exclusion_rho = 0.05;  // vertices must stay out of these balls
  double descent_tol = 2e-3;    // gradient threshold for the warm-start phase
                                // when polishing (tol itself governs otherwise)
  int quad_points = 8;          // fixed per-edge quadrature during descent
  double initial_step = 0.02;
  std::vector<double>* length_trace = nullptr;  // per-iteration lengths
};

// Curve shortening: damped per-step gradient descent on the vertices with a
// homotopy-class guard, optionally polished by single-shooting closure so
// the result is a closed geodesic to integrator accuracy. With polish, tol is
// the shooting closure tolerance; without, the discrete first-variation norm.
RealizationResult shorten(const DiscreteLoop& loop, const MassTriple& m, double tol,
                          int max_iter, const ShortenOptions& opt = {});

// Comparison-curve table for an untied two-letter class: N circuits around
// the enclosed end at (approximately) fixed ell, plus the radial overhead.
// circuit_length strictly decreases toward the 2 pi N cyl_radius bound.
struct AnkletRow {
  double ell = 0.0;
  double rho = 0.0;
  double circuit_length = 0.0;  // N circuits at this level
  double total_length = 0.0;    // circuits + radial in/out from ell = 0
  double lower_bound = 0.0;     // 2 pi N cyl_radius
};
std::vector<AnkletRow> untied_demo(const SignedWord& word, const MassTriple& m,
                                   const std::vector<double>& ell_values);

// Distance-convexity probe between two nearby geodesics: h(t) is the JM
// distance from the point c(t) on the second geodesic to the first one,
// realized by a perpendicular geodesic segment (found by shooting).
// Verifies dh/dt = cos A(t) and the convexity of h where the curvature is
// nonpositive.
struct ConvexityRow {
  double t = 0.0;        // arclength along c
  double h = 0.0;        // distance to gamma
  double angle = 0.0;    // A(t), angle between c'(t) and the foot segment
  double cos_angle = 0.0;
  double dh_dt = 0.0;    // centered finite difference over the probe grid
  double d2h_dt2 = 0.0;
};
std::vector<ConvexityRow> convexity_probe(const GeodesicState& g1,
                                          const GeodesicState& g2,
                                          const MassTriple& m, double window,
                                          int n_samples);

// Hausdorff distance between closed polylines in the round shape metric.
double loop_hausdorff(const std::vector<ShapePoint>& a,
                      const std::vector<ShapePoint>& b);

// Minimum Hausdorff distance over the 12-element equal-mass symmetry group
// (letter rotations, theta reflection, hemisphere flip).
double symmetry_reduced_hausdorff(const std::vector<ShapePoint>& a,
                                  const std::vector<ShapePoint>& b);

// Advance a unit-speed geodesic state by ds (no event bookkeeping).
GeodesicState flow_by(const GeodesicState& start, const MassTriple& m, double ds,
                      double tol = 1e-12);

}  // namespace pants
