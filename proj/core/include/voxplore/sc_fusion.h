#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "voxplore/block_hash_grid.h"
#include "voxplore/grid.h"
#include "voxplore/measured_map.h"

namespace voxplore {

/// Semantic labels carried by ground truth and predictions. kNone marks free
/// space.
enum class SemanticClass : uint8_t { kNone = 0, kFloor = 1, kWall = 2, kFurniture = 3, kSofa = 4 };

const char* toString(SemanticClass c);
SemanticClass semanticClassFromString(const std::string& s);

/// Natural-log odds and its inverse.
inline double logOdds(double p) { return std::log(p / (1.0 - p)); }
inline double probability(double l) {
  if (l >= 0.0) return 1.0 / (1.0 + std::exp(-l));
  const double e = std::exp(l);
  return e / (1.0 + e);
}

/// Per-class occupancy confidence for occupied predictions plus the constant
/// probability used for free predictions.
struct ClassCalibration {
  std::map<uint8_t, double> occupied;  // class id -> p_bar(c), in [0, 1)
  double free_probability = 0.49;      // p_bar_f, in (0, 0.5)

  /// sofa 0.56, floor 0.41, furniture 0.3; wall shares the floor value.
  static ClassCalibration defaults();

  void validate() const;
  /// Throws Error for a class without an entry.
  double confidenceFor(uint8_t class_id) const;

  friend bool operator==(const ClassCalibration&, const ClassCalibration&) = default;
};

/// Log-odds increment of the occupancy-detection fusion rule. Free
/// predictions add log(p_f / (1 - p_f)); occupied predictions of class c add
/// log((1 + p(c)) / (1 - p(c))), which is never negative.
double occupancyUpdateWeight(bool predicted_occupied, uint8_t class_id, const ClassCalibration& calib);

enum class FusionStrategy : uint8_t {
  kOccupancy,
  kProbabilistic,
  kCounting,
  kScFusionBaseline,
  kNoFusion,
};

const char* toString(FusionStrategy s);
FusionStrategy fusionStrategyFromString(const std::string& s);

struct PredictedVoxel {
  bool occupied = false;
  uint8_t class_id = 0;
  float confidence = 1.0f;  // confidence in the emitted state

  friend bool operator==(const PredictedVoxel&, const PredictedVoxel&) = default;
};

/// One scene-completion output: a grid-aligned box of per-voxel estimates.
/// Voxels are stored x-fastest, then y, then z.
struct Prediction {
  static constexpr std::array<int, 3> kDefaultDims{60, 60, 36};

  Pose anchor;
  VoxelIndex origin;  // global index of the box's minimum voxel
  std::array<int, 3> dims = kDefaultDims;
  double voxel_size = 0.08;
  std::vector<PredictedVoxel> voxels;

  size_t volume() const { return static_cast<size_t>(dims[0]) * dims[1] * dims[2]; }
  size_t offset(int i, int j, int k) const {
    return static_cast<size_t>(i) + static_cast<size_t>(dims[0]) * (j + static_cast<size_t>(dims[1]) * k);
  }
  VoxelIndex globalIndex(int i, int j, int k) const { return origin + VoxelIndex{i, j, k}; }

  /// Occupancy probability implied by the emitted state and its confidence.
  static double occupancyProbability(const PredictedVoxel& v) {
    return v.occupied ? v.confidence : 1.0 - v.confidence;
  }

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

/// SC-layer voxel: a single log-odds value. NaN means "never predicted".
struct ScVoxel {
  float log_odds = std::numeric_limits<float>::quiet_NaN();
  bool predicted() const { return !std::isnan(log_odds); }
};

struct HitCount {
  uint32_t hits = 0;
  uint32_t total = 0;
};

/// Laplace-smoothed frequency (hits + 0.5) / (total + 1).
inline double countingProbability(uint32_t hits, uint32_t total) {
  return (hits + 0.5) / (total + 1.0);
}

/// Network probabilities are clamped into [kMinProb, 1 - kMinProb] before
/// conversion to log-odds so that perfect predictions stay finite.
inline constexpr double kMinPredictionProbability = 1e-3;

/// The scene-completion layer.
class ScLayer {
 public:
  explicit ScLayer(GridConfig grid = {});

  /// Fuses one prediction. `measured` is only consulted by the
  /// ScFusionBaseline strategy and may be null otherwise. Throws Error when
  /// the prediction is not aligned with this grid or a class is missing from
  /// the calibration.
  void fuse(const Prediction& prediction, FusionStrategy strategy, const ClassCalibration& calib,
            const MeasuredLayer* measured = nullptr);

  /// Log-odds of a voxel, or nullopt when it has never been predicted.
  std::optional<double> logOddsAt(const VoxelIndex& v) const {
    const ScVoxel& voxel = grid_.get(v);
    if (!voxel.predicted()) return std::nullopt;
    return voxel.log_odds;
  }

  const BlockHashGrid<ScVoxel>& grid() const { return grid_; }
  BlockHashGrid<ScVoxel>& mutableGrid() { return grid_; }
  const BlockHashGrid<HitCount>& counts() const { return counts_; }
  const GridConfig& gridConfig() const { return grid_.config(); }
  size_t predictionsFused() const { return fused_; }

 private:
  BlockHashGrid<ScVoxel> grid_;
  BlockHashGrid<HitCount> counts_;  // only populated by the Counting strategy
  size_t fused_ = 0;
};

}  // namespace voxplore
