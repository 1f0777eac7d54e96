#pragma once

#include "voxplore/sensor_model.h"
#include "voxplore/world.h"

namespace voxplore {

/// Distance along the unit ray to the first occupied ground-truth voxel, or
/// DepthImage::kNoHit when none is hit within max_range.
double castGroundTruth(const GroundTruthWorld& world, const Point& origin, const Point& dir,
                       double max_range);

/// Perfect depth camera. Throws Error when the pose is outside the world.
DepthImage renderDepth(const Pose& pose, const GroundTruthWorld& world, const SensorModel& sensor);

}  // namespace voxplore
