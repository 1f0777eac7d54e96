#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "voxplore/multi_layer_map.h"
#include "voxplore/world.h"

namespace voxplore {

/// Ground-truth evaluation domain: free voxels 6-connected to the start plus
/// the occupied voxels face-adjacent to them.
struct ObservableSpace {
  GridConfig grid;
  std::vector<VoxelIndex> voxels;     // sorted
  std::vector<uint8_t> occupied;      // GT state, aligned with `voxels`

  size_t size() const { return voxels.size(); }
  size_t occupiedCount() const;

  /// Throws Error when the start voxel is occupied or outside the world.
  static ObservableSpace compute(const GroundTruthWorld& world, const Point& start);
};

/// Restriction of the evaluation set: all of V, only voxels the sensor has
/// observed, or only voxels it has not observed.
enum class EvaluationSet : uint8_t { kAllObservable, kObservedOnly, kPredictedOnly };

const char* toString(EvaluationSet s);
EvaluationSet evaluationSetFromString(const std::string& s);

struct MetricsRecord {
  double t = 0.0;
  double E = 0.0;  // explored
  double C = 0.0;  // correct
  double M = 0.0;  // measured
  std::optional<double> P, P_o, P_f, R_o, R_f;  // absent on empty denominators
  int collisions = 0;
  int tree_size = 0;
  double best_utility = 0.0;

  // Raw counts behind the fractions.
  size_t n_total = 0, n_explored = 0, n_correct = 0, n_measured = 0;
  size_t n_pred_occ = 0, n_pred_occ_right = 0, n_pred_free = 0, n_pred_free_right = 0;
  size_t n_gt_occ_seen = 0, n_gt_free_seen = 0;
};

MetricsRecord snapshot(const MultiLayerMap& map, const ObservableSpace& space, int collisions = 0,
                       EvaluationSet set = EvaluationSet::kAllObservable);

using Series = std::vector<std::pair<double, double>>;  // (t, value), t ascending

/// First time the series reaches `goal`, linearly interpolated between
/// samples; nullopt when never reached. Throws Error on an empty series.
std::optional<double> timeToGoal(const Series& series, double goal);

/// Mean of the piecewise-linear series over [t_min, t_max] (trapezoid rule).
double expectedPerformance(const Series& series, double t_min, double t_max);

struct TradeoffWeights {
  double coverage = 1.0;
  double accuracy = 0.0;
  double safety = 0.0;

  void validate() const;
};

/// a1 * C + a2 * P + a3 * O_safe; an absent P contributes zero.
double tradeoffObjective(const MetricsRecord& record, const TradeoffWeights& w, bool o_safe);

}  // namespace voxplore
