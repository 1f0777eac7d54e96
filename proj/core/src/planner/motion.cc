#include "voxplore/planner/motion.h"

#include <algorithm>
#include <cmath>

namespace voxplore {

void MotionLimits::validate() const {
  if (!(v_max > 0.0 && yaw_rate_max > 0.0 && a_max > 0.0)) {
    throw Error("MotionLimits: v_max, yaw rate and a_max must be positive");
  }
}

double translationTime(double d, const MotionLimits& lim) {
  if (d <= 0.0) return 0.0;
  if (std::isinf(lim.a_max)) return d / lim.v_max;
  const double ramp = lim.v_max * lim.v_max / lim.a_max;  // distance of both ramps together
  if (d >= ramp) return d / lim.v_max + lim.v_max / lim.a_max;
  return 2.0 * std::sqrt(d / lim.a_max);
}

double translationDistanceAt(double t, double d, const MotionLimits& lim) {
  if (d <= 0.0 || t <= 0.0) return 0.0;
  const double total = translationTime(d, lim);
  if (t >= total) return d;
  if (std::isinf(lim.a_max)) return lim.v_max * t;
  const double a = lim.a_max;
  double v_peak = lim.v_max;
  double t_ramp = lim.v_max / a;
  if (d < lim.v_max * lim.v_max / a) {
    t_ramp = 0.5 * total;
    v_peak = a * t_ramp;
  }
  if (t <= t_ramp) return 0.5 * a * t * t;
  const double t_cruise_end = total - t_ramp;
  const double ramp_d = 0.5 * a * t_ramp * t_ramp;
  if (t <= t_cruise_end) return ramp_d + v_peak * (t - t_ramp);
  const double rem = total - t;
  return std::min(d, d - 0.5 * a * rem * rem);
}

double edgeCost(const Pose& from, const Pose& to, const MotionLimits& lim) {
  const double d = (to.position - from.position).norm();
  const double yaw = std::abs(yawDifference(from.yaw, to.yaw));
  return std::max(translationTime(d, lim), yaw / lim.yaw_rate_max);
}

}  // namespace voxplore
