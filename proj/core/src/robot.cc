#include "voxplore/robot.h"

#include <algorithm>
#include <cmath>

namespace voxplore {

RobotStep stepRobot(const RobotState& state, const Pose& target, double dt, const MotionLimits& limits) {
  if (!(dt > 0.0)) throw Error("stepRobot: dt must be positive");
  RobotStep out;
  out.state = state;
  RobotState& s = out.state;
  if (!s.moving || !(s.target == target)) {
    s.moving = true;
    s.segment_start = s.pose;
    s.target = target;
    s.segment_time = 0.0;
    s.segment_duration = edgeCost(s.pose, target, limits);
  }
  out.from = s.pose.position;
  double t1 = std::min(s.segment_time + dt, s.segment_duration);
  // Summed steps drift by an ulp or so; don't spend a step on the residue.
  if (s.segment_duration - t1 <= 1e-9) t1 = s.segment_duration;
  out.time_used = t1 - s.segment_time;
  s.segment_time = t1;
  if (t1 >= s.segment_duration) {
    s.pose = target;
    s.moving = false;
    out.arrived = true;
  } else {
    const Point delta = target.position - s.segment_start.position;
    const double d = delta.norm();
    Point pos = s.segment_start.position;
    if (d > 0.0) pos += delta * (translationDistanceAt(t1, d, limits) / d);
    const double turn = yawDifference(s.segment_start.yaw, target.yaw);
    const double swept = std::min(std::abs(turn), limits.yaw_rate_max * t1);
    s.pose = Pose(pos, s.segment_start.yaw + std::copysign(swept, turn));
  }
  out.to = s.pose.position;
  return out;
}

}  // namespace voxplore
