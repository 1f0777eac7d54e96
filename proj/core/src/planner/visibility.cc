#include "voxplore/planner/visibility.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "voxplore/ray_traversal.h"

namespace voxplore {

const char* toString(RaycastMode m) { return m == RaycastMode::kBlocking ? "blocking" : "nonblocking"; }

RaycastMode raycastModeFromString(const std::string& s) {
  if (s == "blocking") return RaycastMode::kBlocking;
  if (s == "nonblocking") return RaycastMode::kNonBlocking;
  throw Error("unknown raycast mode '" + s + "'");
}

void GainRayConfig::validate() const {
  if (columns_per_fov < 1 || rows < 1) throw Error("GainRayConfig: ray counts must be positive");
  if (yaw_samples < 1 || yaw_samples > 32) throw Error("GainRayConfig: yaw samples must lie in [1, 32]");
}

GainEvaluator::GainEvaluator(SensorModel sensor, GainRayConfig config, std::optional<Aabb> bounds)
    : sensor_(sensor), config_(config), bounds_(bounds) {
  sensor_.validate();
  config_.validate();
  constexpr double pi = std::numbers::pi;
  const double hfov = sensor_.horizontal_fov_deg * pi / 180.0;
  const double vfov = sensor_.vertical_fov_deg * pi / 180.0;
  const int columns = std::max(1, static_cast<int>(std::lround(config_.columns_per_fov * 2.0 * pi / hfov)));
  const double step = 2.0 * pi / columns;
  for (int c = 0; c < columns; ++c) azimuths_.push_back(-pi + (c + 0.5) * step);
  for (int r = 0; r < config_.rows; ++r) {
    elevations_.push_back(0.5 * vfov - (r + 0.5) * vfov / config_.rows);
  }
  for (int c = 0; c < columns; ++c) {
    for (int r = 0; r < config_.rows; ++r) {
      const double az = azimuths_[c], el = elevations_[r];
      directions_.emplace_back(std::cos(el) * std::cos(az), std::cos(el) * std::sin(az), std::sin(el));
    }
  }
}

Point GainEvaluator::rayDirection(int column, int row) const {
  return directions_[static_cast<size_t>(column) * config_.rows + row];
}

bool GainEvaluator::inWindow(double az, double yaw) const {
  const double half = 0.5 * sensor_.horizontal_fov_deg * std::numbers::pi / 180.0;
  const double d = yawDifference(yaw, az);
  return d >= -half && d < half;
}

template <typename Visit>
void GainEvaluator::castColumn(const Point& origin, int column, MultiLayerMap::Reader& reader,
                               RaycastMode mode, Visit&& visit) const {
  const MultiLayerMap& map = reader.map();
  const double vs = map.gridConfig().voxel_size;
  VoxelIndex lo{0, 0, 0}, hi{-1, -1, -1};
  if (bounds_) {
    // Voxels whose centres lie inside the bounds.
    for (int a = 0; a < 3; ++a) {
      lo[a] = static_cast<int64_t>(std::ceil(bounds_->min[a] / vs - 0.5));
      hi[a] = static_cast<int64_t>(std::floor(bounds_->max[a] / vs - 0.5));
    }
  }
  for (int r = 0; r < config_.rows; ++r) {
    walkRay(origin, rayDirection(column, r), sensor_.max_range, vs, [&](const RayStep& s) {
      const VoxelIndex& v = s.index;
      if (bounds_ && (v.x < lo.x || v.y < lo.y || v.z < lo.z || v.x > hi.x || v.y > hi.y || v.z > hi.z)) {
        return false;
      }
      const MeasuredVoxel& m = reader.measuredVoxel(v);
      const ScVoxel& sc = reader.scVoxel(v);
      visit(v, m, sc);
      const LookupResult l = map.combine(m, sc);
      if (l.state != Occupancy::kOccupied) return true;
      return !(l.source == LookupSource::kMeasured || mode == RaycastMode::kBlocking);
    });
  }
}

std::vector<VoxelIndex> GainEvaluator::visibleVoxels(const Pose& pose, const MultiLayerMap& map,
                                                     RaycastMode mode) const {
  std::vector<VoxelIndex> out;
  MultiLayerMap::Reader reader(map);
  for (int c = 0; c < numColumns(); ++c) {
    if (!inWindow(azimuths_[c], pose.yaw)) continue;
    castColumn(pose.position, c, reader, mode,
               [&](const VoxelIndex& v, const MeasuredVoxel&, const ScVoxel&) { out.push_back(v); });
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

YawOptimum GainEvaluator::optimizeYaw(const Point& p, const MultiLayerMap& map, GainKind kind,
                                      RaycastMode mode) {
  const double vs = map.gridConfig().voxel_size;
  const int64_t half = static_cast<int64_t>(std::ceil(sensor_.max_range / vs)) + 2;
  if (half != half_) {
    half_ = half;
    side_ = 2 * half + 1;
    const size_t n = static_cast<size_t>(side_) * side_ * side_;
    stamps_.assign(n, 0);
    masks_.assign(n, 0);
    info_.assign(n, 0.0);
    stamp_ = 0;
  }
  if (++stamp_ == 0) {
    std::fill(stamps_.begin(), stamps_.end(), 0);
    stamp_ = 1;
  }

  const int k = config_.yaw_samples;
  YawOptimum out;
  out.gains.assign(k, 0.0);
  for (int i = 0; i < k; ++i) out.yaws.push_back(-std::numbers::pi + 2.0 * std::numbers::pi * i / k);
  std::vector<uint32_t> column_mask(numColumns(), 0);
  for (int c = 0; c < numColumns(); ++c) {
    for (int i = 0; i < k; ++i) {
      if (inWindow(azimuths_[c], out.yaws[i])) column_mask[c] |= 1u << i;
    }
  }

  const VoxelIndex center = worldToIndex(p, vs);
  MultiLayerMap::Reader reader(map);
  for (int c = 0; c < numColumns(); ++c) {
    const uint32_t cm = column_mask[c];
    if (cm == 0) continue;
    castColumn(p, c, reader, mode, [&](const VoxelIndex& v, const MeasuredVoxel& m, const ScVoxel& s) {
      const size_t li = static_cast<size_t>(v.x - center.x + half_) +
                        static_cast<size_t>(side_) * (static_cast<size_t>(v.y - center.y + half_) +
                                                      static_cast<size_t>(side_) * static_cast<size_t>(v.z - center.z + half_));
      if (stamps_[li] != stamp_) {
        stamps_[li] = stamp_;
        masks_[li] = 0;
        info_[li] = voxelInformation(map, m, s, kind);
      }
      const uint32_t fresh = cm & ~masks_[li];
      if (fresh == 0) return;
      masks_[li] |= fresh;
      const double info = info_[li];
      if (info == 0.0) return;
      for (uint32_t bits = fresh; bits; bits &= bits - 1) out.gains[std::countr_zero(bits)] += info;
    });
  }
  size_t best = 0;
  for (size_t i = 1; i < out.gains.size(); ++i) {
    if (out.gains[i] > out.gains[best]) best = i;
  }
  out.yaw = out.yaws[best];
  out.gain = out.gains[best];
  return out;
}

}  // namespace voxplore
