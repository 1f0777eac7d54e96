#pragma once

#include "voxplore/grid.h"

namespace voxplore {

/// Velocity-ramp limits. a_max may be +inf (constant-velocity segments).
struct MotionLimits {
  double v_max = 1.0;                 // m/s
  double yaw_rate_max = 0.5 * 3.14159265358979323846;  // rad/s
  double a_max = 2.0;                 // m/s^2

  void validate() const;
};

/// Rest-to-rest travel time over distance d under a trapezoidal (or
/// triangular) speed profile.
double translationTime(double d, const MotionLimits& limits);

/// Distance covered after time t of the rest-to-rest profile for distance d.
double translationDistanceAt(double t, double d, const MotionLimits& limits);

/// max(translation time, |yaw change| / yaw rate). Zero for identical poses.
double edgeCost(const Pose& from, const Pose& to, const MotionLimits& limits);

}  // namespace voxplore
