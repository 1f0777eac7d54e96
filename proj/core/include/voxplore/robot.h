#pragma once

#include "voxplore/planner/motion.h"

namespace voxplore {

struct RobotState {
  Pose pose;
  bool moving = false;
  Pose segment_start;
  Pose target;
  double segment_time = 0.0;
  double segment_duration = 0.0;
};

struct RobotStep {
  RobotState state;
  Point from = Point::Zero();  // traversed sub-segment
  Point to = Point::Zero();
  double time_used = 0.0;      // <= dt; less when the target is reached early
  bool arrived = false;
};

/// Advances along the straight segment to `target` with the rest-to-rest
/// velocity ramp, turning at the yaw rate limit at the same time. A new
/// target restarts the profile from the current pose. On arrival the pose is
/// exactly the target.
RobotStep stepRobot(const RobotState& state, const Pose& target, double dt, const MotionLimits& limits);

}  // namespace voxplore
