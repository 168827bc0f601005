#pragma once

#include <stdexcept>
#include <string>

namespace pants {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A side length shrank below the configured exclusion radius.
struct CollisionSingularity : Error {
  using Error::Error;
};

// The (phi, theta) chart degenerates at phi = +/- pi/2.
struct PoleSingularity : Error {
  using Error::Error;
};

// Finite-difference step too coarse for the requested oracle.
struct StepTooLarge : Error {
  using Error::Error;
};

// Point outside the coordinate domain of the requested collision end.
struct OutOfChart : Error {
  using Error::Error;
};

// Equator angle falls inside the exclusion ball of a collision point.
struct AtCollision : Error {
  using Error::Error;
};

// Adaptive step size collapsed below the sanity floor.
struct StepFailure : Error {
  using Error::Error;
};

struct OddPeriodicLength : Error {
  using Error::Error;
};

struct NoValidShift : Error {
  using Error::Error;
};

struct UntiedWord : Error {
  using Error::Error;
};

struct TiedWord : Error {
  using Error::Error;
};

// A curve-shortening step changed the loop's reduced syzygy word.
struct HomotopyEscape : Error {
  using Error::Error;
};

struct NoConvergence : Error {
  using Error::Error;
};

struct PatchViolation : Error {
  using Error::Error;
};

struct BoundViolated : Error {
  using Error::Error;
};

// Vanishing separation in the unreduced problem.
struct Singularity : Error {
  using Error::Error;
};

}  // namespace pants
