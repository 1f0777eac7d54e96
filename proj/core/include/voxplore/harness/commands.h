#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "voxplore/harness/config.h"

namespace voxplore {

/// World file if set, procedural world otherwise. A missing file throws an
/// Error that names the path.
GroundTruthWorld loadExperimentWorld(const ExperimentSpec& spec);

struct RunSummary {
  MissionStatus status = MissionStatus::kTimeLimit;
  MetricsRecord final_metrics;
  double elapsed = 0.0;
  std::vector<std::optional<double>> t_explored, t_correct, t_measured;  // per goal
  double expected_E = 0.0, expected_C = 0.0, expected_M = 0.0;
  std::string stream_hash;  // fnv1a of the serialized prediction stream, hex
  size_t collisions = 0;
  size_t planner_events = 0;
};

/// Runs one mission and writes into `out_dir`:
/// metrics.csv, events.csv, predictions.log, map.txt, summary.json,
/// config.txt and (optionally) coverage.svg.
RunSummary cmdRun(const ExperimentSpec& spec, const std::string& out_dir);
RunSummary cmdRun(const ExperimentSpec& spec, const GroundTruthWorld& world, const std::string& out_dir);

struct BatchRun {
  size_t cell = 0;
  int repetition = 0;
  std::vector<std::string> values;  // one per axis, axis order
  std::optional<RunSummary> summary;
  std::string error;  // set when the run failed
};

struct BatchResult {
  std::vector<std::string> axes;
  std::vector<BatchRun> runs;  // cell-major, then repetition
  size_t cells = 0;
};

/// Cartesian product of the axes, each cell repeated `repetitions` times
/// with world and mission seeds offset by the repetition index. Failed runs
/// are recorded and the batch continues. Writes runs.csv and aggregate.csv.
BatchResult cmdBatch(const ExperimentSpec& spec, const std::string& out_dir);

struct ReplayCurve {
  FusionStrategy strategy = FusionStrategy::kOccupancy;
  std::vector<MetricsRecord> snapshots;  // at the mission's metrics cadence
};

/// Re-fuses one recorded stream with every strategy, snapshotting at
/// mission.metrics_period, and writes
/// replay_<strategy>.csv plus replay_R_o.svg when `svg` is set.
std::vector<ReplayCurve> cmdReplayFusion(const std::string& stream_path, const GroundTruthWorld& world,
                                         const std::vector<FusionStrategy>& strategies,
                                         const MissionConfig& mission, const std::string& out_dir,
                                         bool svg);

void cmdGenWorld(const WorldSpec& spec, uint64_t seed, const std::string& path);

/// Metrics of a saved map snapshot against a world.
MetricsRecord cmdEvalMap(const std::string& map_path, const GroundTruthWorld& world, EvaluationSet set);

std::string hexHash(uint64_t h);
void writeSummaryJson(const RunSummary& s, const std::vector<double>& goals, std::ostream& out);

}  // namespace voxplore
