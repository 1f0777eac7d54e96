#pragma once

#include <vector>

#include "voxplore/metrics.h"
#include "voxplore/planner/planner.h"
#include "voxplore/prediction_stream.h"
#include "voxplore/robot.h"
#include "voxplore/sc_oracle.h"

namespace voxplore {

struct MissionConfig {
  double t_max = 600.0;           // s; 0 gives an empty log
  double control_dt = 0.05;       // s
  double sensor_rate = 5.0;       // Hz
  double prediction_rate = 1.24;  // Hz; 0 disables scene completion
  double metrics_period = 10.0;   // s
  int expansions_per_step = 10;
  double replan_period = 1.0;     // s between selection attempts while hovering
  int stuck_limit = 10;
  double start_clear_radius = 0.8;  // m, assumed free at take-off
  PlannerConfig planner;
  SensorModel sensor;
  MeasuredLayerConfig measured;
  FusionStrategy fusion = FusionStrategy::kOccupancy;
  ClassCalibration calibration = ClassCalibration::defaults();
  double tau = 0.0;
  MapView map_view = MapView::kHierarchical;
  OracleMode oracle;
  std::array<int, 3> prediction_dims = Prediction::kDefaultDims;
  EvaluationSet evaluation = EvaluationSet::kAllObservable;
  uint64_t seed = 0;

  void validate() const;
};

enum class MissionStatus : uint8_t { kTimeLimit, kStuck, kCollision };
const char* toString(MissionStatus s);

struct CollisionEvent {
  double t = 0.0;
  Pose pose;
};

struct PlannerEvent {
  int step = 0;
  double t = 0.0;
  Pose pose;  // executed node
  double utility = 0.0;
  int tree_size = 0;
  GainKind gain = GainKind::kExploration;
};

struct MissionLog {
  MissionStatus status = MissionStatus::kTimeLimit;
  double elapsed = 0.0;
  std::vector<MetricsRecord> metrics;
  std::vector<PlannerEvent> events;
  std::vector<CollisionEvent> collisions;
  PredictionStream stream;
  double executed_cost = 0.0;  // sum of edge costs of finished segments
  double motion_time = 0.0;    // simulated time spent on those segments

  bool safe() const { return collisions.empty(); }
};

struct MissionResult {
  MissionLog log;
  MultiLayerMap map;
};

/// Closed loop per control step: sense and integrate, predict and fuse,
/// expand the tree, select on arrival, move. Aborts on the first collision.
MissionResult runMission(const GroundTruthWorld& world, const MissionConfig& config);

/// Rebuilds the map a mission produced from its recorded stream, fusing the
/// predictions with `strategy`. `on_record` (optional) is called after each
/// record with the map and the record's time.
template <typename Fn>
MultiLayerMap replayStream(const PredictionStream& stream, const GroundTruthWorld& world,
                           FusionStrategy strategy, const ClassCalibration& calib, double tau,
                           const MeasuredLayerConfig& measured, Fn&& on_record);

MultiLayerMap replayStream(const PredictionStream& stream, const GroundTruthWorld& world,
                           FusionStrategy strategy, const ClassCalibration& calib, double tau = 0.0,
                           const MeasuredLayerConfig& measured = {});

/// Replays `stream` with `strategy` and snapshots the metrics at every
/// multiple of config.metrics_period (state after all records up to that
/// time) and after the last record, the same cadence a mission uses.
std::vector<MetricsRecord> replaySnapshots(const PredictionStream& stream, const GroundTruthWorld& world,
                                           FusionStrategy strategy, const MissionConfig& config,
                                           const ObservableSpace& space);

}  // namespace voxplore

#include "voxplore/render.h"

namespace voxplore {

template <typename Fn>
MultiLayerMap replayStream(const PredictionStream& stream, const GroundTruthWorld& world,
                           FusionStrategy strategy, const ClassCalibration& calib, double tau,
                           const MeasuredLayerConfig& measured, Fn&& on_record) {
  if (std::abs(stream.voxel_size - world.gridConfig().voxel_size) > 1e-12) {
    throw Error("replay: stream and world voxel sizes differ");
  }
  MultiLayerMap map(world.gridConfig(), measured, world.bounds(), tau);
  for (const StreamRecord& r : stream.records) {
    if (r.kind == StreamRecord::Kind::kClear) {
      map.measured().clearSphere(r.pose.position, r.radius);
    } else if (r.kind == StreamRecord::Kind::kFrame) {
      map.measured().integrateDepth(r.pose, renderDepth(r.pose, world, stream.sensor), stream.sensor);
    } else {
      map.sc().fuse(r.prediction, strategy, calib, &map.measured());
    }
    on_record(static_cast<const MultiLayerMap&>(map), r);
  }
  return map;
}

}  // namespace voxplore
