#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "voxplore/planner/gain.h"
#include "voxplore/sensor_model.h"

namespace voxplore {

enum class RaycastMode : uint8_t { kBlocking, kNonBlocking };

const char* toString(RaycastMode m);
RaycastMode raycastModeFromString(const std::string& s);

/// Ray fan used for gain evaluation. The full circle is divided into
/// equal azimuth columns (columns_per_fov of them inside one horizontal
/// field of view) and the vertical field of view into `rows` elevations,
/// both bin-centred. A view at yaw psi sees the columns whose azimuth lies
/// in [psi - hfov/2, psi + hfov/2).
struct GainRayConfig {
  int columns_per_fov = 64;
  int rows = 48;
  int yaw_samples = 8;

  void validate() const;
};

struct YawOptimum {
  double yaw = 0.0;
  double gain = 0.0;
  std::vector<double> yaws;   // sampled yaws, ascending from -pi
  std::vector<double> gains;  // gain per sampled yaw
};

/// Casts the fan against a MultiLayerMap. Rays stop at the first measured
/// occupied voxel (inclusive), at predicted occupied voxels in blocking mode
/// (inclusive), at the sensor range and at the planning bounds (exclusive).
/// Holds scratch buffers, so one evaluator must not be shared between
/// threads.
class GainEvaluator {
 public:
  GainEvaluator(SensorModel sensor, GainRayConfig config, std::optional<Aabb> bounds = std::nullopt);

  int numColumns() const { return static_cast<int>(azimuths_.size()); }
  double columnAzimuth(int c) const { return azimuths_[c]; }
  double rowElevation(int r) const { return elevations_[r]; }
  Point rayDirection(int column, int row) const;
  /// Whether azimuth `az` falls in the window of a view at `yaw`.
  bool inWindow(double az, double yaw) const;

  /// Sorted, duplicate-free set of voxels seen from the pose.
  std::vector<VoxelIndex> visibleVoxels(const Pose& pose, const MultiLayerMap& map,
                                        RaycastMode mode) const;

  /// Gain of every sampled yaw at position p (each voxel counted once per
  /// view) and the best one; ties resolve to the smallest yaw.
  YawOptimum optimizeYaw(const Point& p, const MultiLayerMap& map, GainKind kind, RaycastMode mode);

  const SensorModel& sensor() const { return sensor_; }
  const GainRayConfig& config() const { return config_; }

 private:
  template <typename Visit>
  void castColumn(const Point& origin, int column, MultiLayerMap::Reader& reader, RaycastMode mode,
                  Visit&& visit) const;

  SensorModel sensor_;
  GainRayConfig config_;
  std::optional<Aabb> bounds_;
  std::optional<std::pair<VoxelIndex, VoxelIndex>> index_bounds_;
  std::vector<double> azimuths_;
  std::vector<double> elevations_;
  std::vector<Point> directions_;  // column-major: column * rows + row

  // Scratch for optimizeYaw: a dense cube around the evaluation point.
  int64_t half_ = 0;
  int64_t side_ = 0;
  uint32_t stamp_ = 0;
  std::vector<uint32_t> stamps_;
  std::vector<uint32_t> masks_;
  std::vector<double> info_;
};

}  // namespace voxplore
