#include "voxplore/measured_map.h"

#include <algorithm>

#include "voxplore/ray_traversal.h"

namespace voxplore {

const char* toString(Occupancy s) {
  switch (s) {
    case Occupancy::kUnknown: return "unknown";
    case Occupancy::kFree: return "free";
    case Occupancy::kOccupied: return "occupied";
  }
  return "?";
}

MeasuredLayer::MeasuredLayer(GridConfig grid, MeasuredLayerConfig config, std::optional<Aabb> bounds)
    : grid_(grid, MeasuredVoxel{}), config_(config), bounds_(bounds) {
  if (!(config_.min_log_odds < 0.0 && config_.max_log_odds > 0.0)) {
    throw Error("MeasuredLayerConfig: clamp range must straddle zero");
  }
}

void MeasuredLayer::applyUpdate(MeasuredVoxel& voxel, bool occupied) const {
  const double delta = occupied ? config_.log_odds_hit : config_.log_odds_miss;
  const double updated = std::clamp(static_cast<double>(voxel.log_odds) + delta,
                                    config_.min_log_odds, config_.max_log_odds);
  voxel.log_odds = static_cast<float>(updated);
  voxel.observed = true;
}

void MeasuredLayer::update(const VoxelIndex& v, bool occupied) { applyUpdate(grid_.at(v), occupied); }

void MeasuredLayer::clearSphere(const Point& center, double radius) {
  const double vs = grid_.config().voxel_size;
  const VoxelIndex lo = worldToIndex(center.array() - radius, vs);
  const VoxelIndex hi = worldToIndex(center.array() + radius, vs);
  for (int64_t z = lo.z; z <= hi.z; ++z)
    for (int64_t y = lo.y; y <= hi.y; ++y)
      for (int64_t x = lo.x; x <= hi.x; ++x) {
        const VoxelIndex v{x, y, z};
        const Point c = indexToCenter(v, vs);
        if ((c - center).norm() > radius) continue;
        if (bounds_ && !bounds_->contains(c)) continue;
        update(v, false);
      }
}

void MeasuredLayer::integrateDepth(const Pose& pose, const DepthImage& depth,
                                   const SensorModel& sensor) {
  if (bounds_ && !bounds_->contains(pose.position)) {
    throw Error("integrateDepth: pose outside world bounds");
  }
  if (depth.width <= 0 || depth.height <= 0 || depth.ranges.empty()) return;
  if (static_cast<int>(depth.size()) != depth.width * depth.height) {
    throw Error("integrateDepth: depth image size mismatch");
  }

  ++frame_;
  hits_.clear();
  misses_.clear();
  const double voxel_size = grid_.config().voxel_size;
  for (int v = 0; v < depth.height; ++v) {
    for (int u = 0; u < depth.width; ++u) {
      const double range = depth.at(u, v);
      const Point dir = sensor.pixelDirection(u, v, pose.yaw);
      const bool has_hit = std::isfinite(range) && range <= sensor.max_range;
      if (has_hit) {
        // The voxel containing the ray point at `range` is the surface voxel;
        // it is the one whose exit lies beyond the range.
        const double length = range + 1e-9 + 1e-12 * range;
        walkRay(pose.position, dir, length, voxel_size, [&](const RayStep& s) {
          if (s.t_exit > range) {
            hits_.push_back(s.index);
            return false;
          }
          misses_.push_back(s.index);
          return true;
        });
      } else {
        walkRay(pose.position, dir, sensor.max_range, voxel_size, [&](const RayStep& s) {
          misses_.push_back(s.index);
          return true;
        });
      }
    }
  }

  BlockHashGrid<MeasuredVoxel>::Writer writer(grid_);
  for (const VoxelIndex& idx : hits_) {
    MeasuredVoxel& voxel = writer.at(idx);
    if (voxel.last_frame == frame_) continue;
    voxel.last_frame = frame_;
    applyUpdate(voxel, true);
  }
  for (const VoxelIndex& idx : misses_) {
    MeasuredVoxel& voxel = writer.at(idx);
    if (voxel.last_frame == frame_) continue;
    voxel.last_frame = frame_;
    applyUpdate(voxel, false);
  }
}

}  // namespace voxplore
