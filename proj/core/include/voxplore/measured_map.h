#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <vector>

#include "voxplore/block_hash_grid.h"
#include "voxplore/sensor_model.h"

namespace voxplore {

/// Ternary voxel state: m_u, m_f, m_o.
enum class Occupancy : uint8_t { kUnknown = 0, kFree = 1, kOccupied = 2 };

const char* toString(Occupancy s);

struct MeasuredVoxel {
  float log_odds = 0.0f;
  uint32_t last_frame = 0;
  bool observed = false;
};

struct MeasuredLayerConfig {
  double log_odds_hit = std::log(0.7 / 0.3);
  double log_odds_miss = std::log(0.3 / 0.7);
  double min_log_odds = -10.0;
  double max_log_odds = 10.0;
};

/// Sensor-measurement layer: log-odds occupancy with per-ray free-space
/// carving. Each frame updates a voxel at most once; when one ray ends in a
/// voxel that another ray passes through, the occupied update wins.
class MeasuredLayer {
 public:
  explicit MeasuredLayer(GridConfig grid = {}, MeasuredLayerConfig config = {},
                         std::optional<Aabb> bounds = std::nullopt);

  /// Integrates one depth frame taken from `pose`. Throws Error when bounds
  /// are set and the pose lies outside them.
  void integrateDepth(const Pose& pose, const DepthImage& depth, const SensorModel& sensor);

  /// One free update for every voxel whose centre lies within `radius` of
  /// `center` (and inside the bounds, if set).
  void clearSphere(const Point& center, double radius);

  /// Applies a single hit/miss update to one voxel, outside any frame.
  void update(const VoxelIndex& v, bool occupied);

  Occupancy state(const VoxelIndex& v) const { return stateOf(grid_.get(v)); }

  static Occupancy stateOf(const MeasuredVoxel& voxel) {
    if (!voxel.observed) return Occupancy::kUnknown;
    return voxel.log_odds >= 0.0f ? Occupancy::kOccupied : Occupancy::kFree;
  }

  const BlockHashGrid<MeasuredVoxel>& grid() const { return grid_; }
  BlockHashGrid<MeasuredVoxel>& mutableGrid() { return grid_; }
  const GridConfig& gridConfig() const { return grid_.config(); }
  const MeasuredLayerConfig& config() const { return config_; }
  const std::optional<Aabb>& bounds() const { return bounds_; }
  uint32_t framesIntegrated() const { return frame_; }

 private:
  void applyUpdate(MeasuredVoxel& voxel, bool occupied) const;

  BlockHashGrid<MeasuredVoxel> grid_;
  MeasuredLayerConfig config_;
  std::optional<Aabb> bounds_;
  uint32_t frame_ = 0;
  std::vector<VoxelIndex> hits_;
  std::vector<VoxelIndex> misses_;
};

}  // namespace voxplore
