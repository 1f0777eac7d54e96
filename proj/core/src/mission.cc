#include "voxplore/mission.h"

#include <cmath>

namespace voxplore {

void MissionConfig::validate() const {
  if (!(t_max >= 0.0)) throw Error("MissionConfig: t_max must be non-negative");
  if (!(control_dt > 0.0)) throw Error("MissionConfig: control_dt must be positive");
  if (!(sensor_rate > 0.0)) throw Error("MissionConfig: sensor rate must be positive");
  if (!(prediction_rate >= 0.0)) throw Error("MissionConfig: prediction rate must be non-negative");
  if (!(metrics_period > 0.0)) throw Error("MissionConfig: metrics period must be positive");
  if (expansions_per_step < 0) throw Error("MissionConfig: negative expansion count");
  if (!(replan_period > 0.0)) throw Error("MissionConfig: replan period must be positive");
  if (stuck_limit < 1) throw Error("MissionConfig: stuck limit must be >= 1");
  if (!(start_clear_radius >= 0.0)) throw Error("MissionConfig: negative start clearance");
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error("MissionConfig: tau must lie in [0, 1]");
  planner.validate();
  sensor.validate();
  calibration.validate();
  if (oracle.kind == OracleKind::kNoisy) oracle.noise.validate();
}

const char* toString(MissionStatus s) {
  switch (s) {
    case MissionStatus::kTimeLimit: return "time_limit";
    case MissionStatus::kStuck: return "stuck";
    case MissionStatus::kCollision: return "collision";
  }
  return "?";
}

MultiLayerMap replayStream(const PredictionStream& stream, const GroundTruthWorld& world,
                           FusionStrategy strategy, const ClassCalibration& calib, double tau,
                           const MeasuredLayerConfig& measured) {
  return replayStream(stream, world, strategy, calib, tau, measured,
                      [](const MultiLayerMap&, const StreamRecord&) {});
}

std::vector<MetricsRecord> replaySnapshots(const PredictionStream& stream, const GroundTruthWorld& world,
                                           FusionStrategy strategy, const MissionConfig& config,
                                           const ObservableSpace& space) {
  if (!(config.metrics_period > 0.0)) throw Error("replay: metrics period must be positive");
  const auto& recs = stream.records;
  const double eps = 1e-9;
  std::vector<MetricsRecord> out;
  double due = 0.0;
  size_t i = 0;
  auto take = [&](const MultiLayerMap& map, double t) {
    MetricsRecord m = snapshot(map, space, 0, config.evaluation);
    m.t = t;
    out.push_back(m);
  };
  replayStream(stream, world, strategy, config.calibration, config.tau, config.measured,
               [&](const MultiLayerMap& map, const StreamRecord& r) {
                 const double next = i + 1 < recs.size() ? recs[i + 1].time : INFINITY;
                 ++i;
                 while (due < r.time - eps) due += config.metrics_period;
                 if (std::isinf(next)) {
                   take(map, r.time);
                   return;
                 }
                 for (; due < next - eps; due += config.metrics_period) take(map, due);
               });
  return out;
}

MissionResult runMission(const GroundTruthWorld& world, const MissionConfig& cfg) {
  cfg.validate();
  MissionResult result{MissionLog{}, MultiLayerMap(world.gridConfig(), cfg.measured, world.bounds(), cfg.tau)};
  MissionLog& log = result.log;
  MultiLayerMap& map = result.map;
  map.setView(cfg.map_view);
  log.stream.voxel_size = world.gridConfig().voxel_size;
  log.stream.sensor = cfg.sensor;
  if (cfg.t_max <= 0.0) return result;

  const Pose start = world.start();
  if (!world.bounds().contains(start.position)) throw Error("runMission: start outside the world");
  if (world.sphereCollides(start.position, std::max(cfg.start_clear_radius, cfg.planner.collision_radius))) {
    throw Error("runMission: start clearance overlaps ground-truth obstacles");
  }
  const ObservableSpace space = ObservableSpace::compute(world, start.position);
  const bool use_predictions = cfg.prediction_rate > 0.0 && cfg.map_view != MapView::kMeasuredOnly;

  Planner planner(cfg.planner, cfg.sensor, world.bounds(), mixSeed(cfg.seed, 1));
  planner.reset(start);
  RobotState robot;
  robot.pose = start;

  uint64_t version = 0;
  if (cfg.start_clear_radius > 0.0) {
    map.measured().clearSphere(start.position, cfg.start_clear_radius);
    ++version;
    StreamRecord r;
    r.kind = StreamRecord::Kind::kClear;
    r.pose = start;
    r.radius = cfg.start_clear_radius;
    log.stream.records.push_back(r);
  }

  const double dt = cfg.control_dt;
  const double eps = 1e-9;
  const double sensor_period = 1.0 / cfg.sensor_rate;
  const double prediction_period = use_predictions ? 1.0 / cfg.prediction_rate : 0.0;
  int64_t sensor_count = 0, prediction_count = 0, metrics_count = 0;
  double next_attempt = 0.0;
  int stuck = 0;
  int planning_step = 0;
  Pose goal = start;
  bool have_goal = false;
  double pending_cost = 0.0, segment_motion = 0.0;

  auto recordMetrics = [&](double t) {
    MetricsRecord m = snapshot(map, space, static_cast<int>(log.collisions.size()), cfg.evaluation);
    m.t = t;
    m.tree_size = planner.tree().size();
    m.best_utility = planner.bestUtility();
    log.metrics.push_back(m);
  };

  double t = 0.0;
  for (int64_t step = 0;; ++step) {
    t = static_cast<double>(step) * dt;
    if (t >= cfg.t_max - eps) break;

    if (t >= sensor_count * sensor_period - eps) {
      ++sensor_count;
      map.measured().integrateDepth(robot.pose, renderDepth(robot.pose, world, cfg.sensor), cfg.sensor);
      ++version;
      StreamRecord r;
      r.kind = StreamRecord::Kind::kFrame;
      r.time = t;
      r.pose = robot.pose;
      log.stream.records.push_back(r);
    }
    if (use_predictions && t >= prediction_count * prediction_period - eps) {
      OracleMode mode = cfg.oracle;
      mode.noise.seed = mixSeed(mixSeed(cfg.seed, 2), static_cast<uint64_t>(prediction_count));
      ++prediction_count;
      StreamRecord r;
      r.kind = StreamRecord::Kind::kPrediction;
      r.time = t;
      r.pose = robot.pose;
      r.prediction = predict(robot.pose, world, mode, cfg.prediction_dims);
      map.sc().fuse(r.prediction, cfg.fusion, cfg.calibration, &map.measured());
      ++version;
      log.stream.records.push_back(std::move(r));
    }
    if (t >= metrics_count * cfg.metrics_period - eps) {
      ++metrics_count;
      recordMetrics(t);
    }

    planner.expand(map, version, cfg.expansions_per_step);

    if (!have_goal && t >= next_attempt - eps) {
      const auto sel = planner.select(map, version);
      if (sel) {
        goal = sel->pose;
        have_goal = true;
        stuck = 0;
        PlannerEvent e;
        e.step = planning_step++;
        e.t = t;
        e.pose = goal;
        e.utility = sel->utility;
        e.tree_size = planner.tree().size();
        e.gain = cfg.planner.gain;
        log.events.push_back(e);
        pending_cost = sel->cost;
        segment_motion = 0.0;
      } else {
        next_attempt = t + cfg.replan_period;
        if (++stuck >= cfg.stuck_limit) {
          log.status = MissionStatus::kStuck;
          break;
        }
      }
    }

    if (have_goal) {
      const RobotStep s = stepRobot(robot, goal, dt, cfg.planner.motion);
      robot = s.state;
      segment_motion += s.time_used;
      if (world.sphereCollides(robot.pose.position, cfg.planner.collision_radius)) {
        log.collisions.push_back({t + s.time_used, robot.pose});
        log.status = MissionStatus::kCollision;
        t += dt;
        break;
      }
      if (s.arrived) {
        log.executed_cost += pending_cost;
        log.motion_time += segment_motion;
        have_goal = false;
        next_attempt = t + dt;
      }
    }
  }
  log.elapsed = std::min(t, cfg.t_max);
  if (log.metrics.empty() || log.metrics.back().t < log.elapsed) recordMetrics(log.elapsed);
  return result;
}

}  // namespace voxplore
