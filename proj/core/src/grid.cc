#include "voxplore/grid.h"

#include <numbers>

#include "voxplore/ray_traversal.h"

namespace voxplore {

void GridConfig::validate() const {
  if (!(voxel_size > 0.0) || !std::isfinite(voxel_size)) {
    throw Error("GridConfig: voxel_size must be positive, got " + std::to_string(voxel_size));
  }
  if (block_side < 1 || (block_side & (block_side - 1)) != 0) {
    throw Error("GridConfig: block_side must be a power of two, got " +
                std::to_string(block_side));
  }
}

Pose::Pose(double x, double y, double z, double yaw_rad)
    : position(x, y, z), yaw(normalizeYaw(yaw_rad)) {}

Pose::Pose(const Point& p, double yaw_rad) : position(p), yaw(normalizeYaw(yaw_rad)) {}

double normalizeYaw(double yaw) {
  constexpr double kPi = std::numbers::pi;
  if (yaw >= -kPi && yaw < kPi) return yaw;
  double wrapped = std::fmod(yaw + kPi, 2.0 * kPi);
  if (wrapped < 0.0) wrapped += 2.0 * kPi;
  wrapped -= kPi;
  // fmod can land exactly on +pi after the shift.
  if (wrapped >= kPi) wrapped -= 2.0 * kPi;
  return wrapped;
}

double yawDifference(double from, double to) { return normalizeYaw(to - from); }

std::string toString(const VoxelIndex& v) {
  return "(" + std::to_string(v.x) + ", " + std::to_string(v.y) + ", " + std::to_string(v.z) + ")";
}

std::vector<VoxelIndex> traverseRay(const Point& origin, const Point& direction, double max_length,
                                    double voxel_size) {
  std::vector<VoxelIndex> out;
  walkRay(origin, direction, max_length, voxel_size, [&](const RayStep& s) {
    out.push_back(s.index);
    return true;
  });
  return out;
}

}  // namespace voxplore
