#include "voxplore/render.h"

#include "voxplore/ray_traversal.h"

namespace voxplore {

double castGroundTruth(const GroundTruthWorld& world, const Point& origin, const Point& dir,
                       double max_range) {
  double hit = DepthImage::kNoHit;
  walkRay(origin, dir, max_range, world.gridConfig().voxel_size, [&](const RayStep& s) {
    if (world.occupied(s.index)) {
      hit = s.t_entry;
      return false;
    }
    return true;
  });
  return hit;
}

DepthImage renderDepth(const Pose& pose, const GroundTruthWorld& world, const SensorModel& sensor) {
  if (!world.bounds().contains(pose.position)) throw Error("renderDepth: pose outside the world");
  DepthImage image(sensor.width, sensor.height);
  for (int v = 0; v < sensor.height; ++v) {
    for (int u = 0; u < sensor.width; ++u) {
      image.at(u, v) = castGroundTruth(world, pose.position, sensor.pixelDirection(u, v, pose.yaw),
                                       sensor.max_range);
    }
  }
  return image;
}

}  // namespace voxplore
