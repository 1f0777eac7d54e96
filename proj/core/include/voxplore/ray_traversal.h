#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "voxplore/grid.h"

namespace voxplore {

/// One voxel pierced by a ray, with the ray parameters at which the ray
/// enters and leaves it (clipped to the traversal length).
struct RayStep {
  VoxelIndex index;
  double t_entry = 0.0;
  double t_exit = 0.0;
};

/// Exact grid traversal (Amanatides & Woo). Calls visit(const RayStep&) for
/// every voxel the segment [origin, origin + max_length * dir] passes
/// through, in order; stops early when visit returns false.
///
/// Simultaneous boundary crossings are resolved by stepping x, then y, then
/// z, so the sequence stays face-connected. `direction` need not be unit
/// length but must be non-zero and finite.
template <typename Visitor>
void walkRay(const Point& origin, const Point& direction, double max_length, double voxel_size,
             Visitor&& visit) {
  const double norm = direction.norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw Error("walkRay: direction must be non-zero and finite");
  }
  if (!(max_length > 0.0)) return;
  const Point dir = direction / norm;
  constexpr double kInf = std::numeric_limits<double>::infinity();

  VoxelIndex current = worldToIndex(origin, voxel_size);
  int64_t step[3];
  double t_max[3];
  double t_delta[3];
  for (int a = 0; a < 3; ++a) {
    if (dir[a] > 0.0) {
      step[a] = 1;
      const double boundary = static_cast<double>(current[a] + 1) * voxel_size;
      t_max[a] = (boundary - origin[a]) / dir[a];
      t_delta[a] = voxel_size / dir[a];
    } else if (dir[a] < 0.0) {
      step[a] = -1;
      const double boundary = static_cast<double>(current[a]) * voxel_size;
      t_max[a] = (boundary - origin[a]) / dir[a];
      t_delta[a] = -voxel_size / dir[a];
    } else {
      step[a] = 0;
      t_max[a] = kInf;
      t_delta[a] = kInf;
    }
  }

  double t_entry = 0.0;
  while (true) {
    int axis = 0;
    if (t_max[1] < t_max[axis]) axis = 1;
    if (t_max[2] < t_max[axis]) axis = 2;
    const double t_next = t_max[axis];
    const RayStep s{current, t_entry, t_next < max_length ? t_next : max_length};
    if (!visit(s)) return;
    if (t_next >= max_length) return;
    current[axis] += step[axis];
    t_entry = t_next;
    t_max[axis] += t_delta[axis];
  }
}

/// Ordered list of voxels pierced by the segment; see walkRay.
std::vector<VoxelIndex> traverseRay(const Point& origin, const Point& direction, double max_length,
                                    double voxel_size);

}  // namespace voxplore
