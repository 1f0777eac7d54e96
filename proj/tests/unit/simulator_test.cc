#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "oracles/oracles.h"
#include "voxplore/map_snapshot.h"
#include "voxplore/metrics.h"
#include "voxplore/mission.h"
#include "voxplore/random.h"
#include "voxplore/render.h"
#include "voxplore/world.h"

using namespace voxplore;

namespace {

WorldSpec smallSpec() {
  WorldSpec s;
  s.size_x = 6.0;
  s.size_y = 5.0;
  s.size_z = 2.5;
  s.voxel_size = 0.1;
  s.rooms = 2;
  s.wall_thickness = 0.2;
  s.clutter_per_room = 2;
  return s;
}

MissionConfig fastMission(double t_max) {
  MissionConfig m;
  m.t_max = t_max;
  m.planner.rays = GainRayConfig{12, 8, 4};
  m.expansions_per_step = 2;
  m.sensor.width = 32;
  m.sensor.height = 24;
  m.prediction_dims = {30, 30, 25};
  m.metrics_period = 2.0;
  m.seed = 4;
  return m;
}

oracle::DenseGrid dense(const GroundTruthWorld& w) {
  oracle::DenseGrid g;
  g.nx = static_cast<int>(w.dims()[0]);
  g.ny = static_cast<int>(w.dims()[1]);
  g.nz = static_cast<int>(w.dims()[2]);
  g.occ.resize(w.volume());
  for (int z = 0; z < g.nz; ++z)
    for (int y = 0; y < g.ny; ++y)
      for (int x = 0; x < g.nx; ++x) g.occ[x + g.nx * (y + g.ny * z)] = w.occupied({x, y, z});
  return g;
}

}  // namespace

TEST(WorldGenerator, DeterministicPerSeed) {
  const WorldSpec s = smallSpec();
  EXPECT_EQ(generateWorld(s, 1), generateWorld(s, 1));
  EXPECT_FALSE(generateWorld(s, 1) == generateWorld(s, 2));
}

TEST(WorldGenerator, EnvelopeAndStart) {
  const WorldSpec s = smallSpec();
  for (uint64_t seed = 0; seed < 5; ++seed) {
    const GroundTruthWorld w = generateWorld(s, seed);
    ASSERT_EQ(w.dims()[0], 60);
    ASSERT_EQ(w.dims()[2], 25);
    const auto floor = static_cast<uint8_t>(SemanticClass::kFloor);
    const auto wall = static_cast<uint8_t>(SemanticClass::kWall);
    for (int y = 0; y < 50; ++y)
      for (int x = 0; x < 60; ++x) {
        ASSERT_EQ(w.label({x, y, 0}), floor);
        ASSERT_EQ(w.label({x, y, 24}), wall);
      }
    for (int z = 1; z < 24; ++z)
      for (int y = 0; y < 50; ++y) {
        ASSERT_EQ(w.label({0, y, z}), wall);
        ASSERT_EQ(w.label({1, y, z}), wall);
        ASSERT_EQ(w.label({59, y, z}), wall);
      }
    EXPECT_NEAR(w.start().z(), s.start_height, s.voxel_size);
    EXPECT_FALSE(w.sphereCollides(w.start().position, MissionConfig{}.start_clear_radius));
  }
}

TEST(WorldGenerator, AllFreeSpaceIsReachableFromStart) {
  const WorldSpec s = smallSpec();
  for (uint64_t seed = 0; seed < 3; ++seed) {
    const GroundTruthWorld w = generateWorld(s, seed);
    const oracle::DenseGrid g = dense(w);
    const auto reach = oracle::observableByBfs(g, worldToIndex(w.start().position, w.gridConfig()));
    size_t free_total = 0, free_reached = 0;
    for (int z = 0; z < g.nz; ++z)
      for (int y = 0; y < g.ny; ++y)
        for (int x = 0; x < g.nx; ++x) {
          if (g.at(x, y, z)) continue;
          ++free_total;
          free_reached += reach.count({x, y, z});
        }
    EXPECT_EQ(free_total, free_reached) << "seed " << seed;
    // The layout must really have more than one room: some interior wall.
    size_t walls = 0;
    for (int y = 3; y < 47; ++y)
      for (int x = 3; x < 57; ++x) walls += w.label({x, y, 22}) == static_cast<uint8_t>(SemanticClass::kWall);
    EXPECT_GT(walls, 20u);
  }
}

TEST(WorldGenerator, RejectsBadSpecs) {
  WorldSpec s = smallSpec();
  s.size_x = 1.0;
  EXPECT_THROW(s.validate(), Error);
  s = smallSpec();
  s.door_height = 3.0;
  EXPECT_THROW(s.validate(), Error);
}

TEST(WorldFile, RoundTripAndErrors) {
  const GroundTruthWorld w = generateWorld(smallSpec(), 3);
  std::stringstream ss;
  writeWorld(w, ss);
  EXPECT_EQ(readWorld(ss), w);
  std::stringstream bad("voxplore-world 1\nvoxel_size 0.1\ndims 2 2 2\nstart 0 0 0 0\nruns 1\n0 7\nend\n");
  EXPECT_THROW(readWorld(bad), Error);
  try {
    loadWorld("/nonexistent/world.txt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/world.txt"), std::string::npos);
  }
}

TEST(Render, DepthMatchesSlabOracle) {
  const GroundTruthWorld w = generateWorld(smallSpec(), 5);
  SensorModel sensor;
  sensor.width = 12;
  sensor.height = 9;
  const Pose pose(w.start().position, 0.4);
  const DepthImage d = renderDepth(pose, w, sensor);
  const double vs = w.gridConfig().voxel_size;
  for (int v = 0; v < sensor.height; ++v)
    for (int u = 0; u < sensor.width; ++u) {
      const Point dir = sensor.pixelDirection(u, v, pose.yaw);
      double best = DepthImage::kNoHit;
      for (const VoxelIndex& x : oracle::voxelsOnSegment(pose.position, dir, sensor.max_range, vs, 0.0)) {
        if (!w.occupied(x)) continue;
        best = std::min(best, oracle::segmentBox(pose.position, dir, sensor.max_range, x, vs)->first);
      }
      if (std::isinf(best)) {
        EXPECT_TRUE(std::isinf(d.at(u, v)));
      }
      else EXPECT_NEAR(d.at(u, v), best, 1e-9) << u << "," << v;
    }
  EXPECT_THROW(renderDepth(Pose(-1, 0, 0, 0), w, sensor), Error);
}

TEST(Robot, TrapezoidMotionEndsExactlyAtTarget) {
  const MotionLimits m;
  RobotState s;
  s.pose = Pose(0, 0, 1, 0);
  const Pose target(2, 0, 1, 1.0);
  const double T = edgeCost(s.pose, target, m);
  double used = 0.0;
  int steps = 0;
  for (;; ++steps) {
    const RobotStep r = stepRobot(s, target, 0.05, m);
    used += r.time_used;
    EXPECT_NEAR(r.state.pose.position.x(), translationDistanceAt(used, 2.0, m), 1e-12);
    s = r.state;
    if (r.arrived) break;
  }
  EXPECT_EQ(s.pose, target);
  EXPECT_NEAR(used, T, 1e-12);
  EXPECT_EQ(steps, static_cast<int>(std::ceil(T / 0.05 - 1e-9)) - 1);
}

TEST(Robot, YawRampIsRateLimited) {
  const MotionLimits m;
  RobotState s;
  s.pose = Pose(0, 0, 1, 0);
  const RobotStep r = stepRobot(s, Pose(0, 0, 1, 3.0), 0.1, m);
  EXPECT_NEAR(r.state.pose.yaw, m.yaw_rate_max * 0.1, 1e-12);
  EXPECT_THROW(stepRobot(s, Pose(), 0.0, m), Error);
}

TEST(Mission, DeterministicAndConsistent) {
  const GroundTruthWorld w = generateWorld(smallSpec(), 1);
  MissionConfig cfg = fastMission(20.0);
  cfg.oracle = OracleMode::perfect();
  cfg.planner.gain = GainKind::kSc;
  const MissionResult a = runMission(w, cfg);
  const MissionResult b = runMission(w, cfg);
  EXPECT_EQ(a.log.stream.toString(), b.log.stream.toString());
  ASSERT_EQ(a.log.metrics.size(), b.log.metrics.size());
  for (size_t i = 0; i < a.log.metrics.size(); ++i) {
    const MetricsRecord& r = a.log.metrics[i];
    EXPECT_EQ(r.E, b.log.metrics[i].E);
    EXPECT_GE(r.E, r.C);
    EXPECT_GE(r.E, r.M);
    EXPECT_LE(r.E, 1.0);
    if (i) {
      EXPECT_GT(r.t, a.log.metrics[i - 1].t);
    }
    if (r.P) {
      EXPECT_EQ(r.n_correct, static_cast<size_t>(std::llround(*r.P * r.n_explored)));
    }
  }
  EXPECT_TRUE(a.log.safe());
  EXPECT_EQ(a.log.status, MissionStatus::kTimeLimit);
  EXPECT_DOUBLE_EQ(a.log.elapsed, 20.0);
  EXPECT_GT(a.log.events.size(), 2u);
  EXPECT_NEAR(a.log.motion_time, a.log.executed_cost, 1e-9 * (1 + a.log.events.size()));
  EXPECT_GT(a.log.metrics.back().M, a.log.metrics.front().M);
}

TEST(Mission, ReplayReproducesTheMap) {
  const GroundTruthWorld w = generateWorld(smallSpec(), 2);
  MissionConfig cfg = fastMission(10.0);
  const MissionResult r = runMission(w, cfg);
  const MultiLayerMap replayed = replayStream(r.log.stream, w, cfg.fusion, cfg.calibration, cfg.tau, cfg.measured);
  std::stringstream a, b;
  writeMapSnapshot(r.map, a);
  writeMapSnapshot(replayed, b);
  EXPECT_EQ(a.str(), b.str());
  // The stream itself round-trips through text.
  std::stringstream ss(r.log.stream.toString());
  EXPECT_EQ(PredictionStream::read(ss).records, r.log.stream.records);
}

TEST(Mission, EdgeCases) {
  const GroundTruthWorld w = generateWorld(smallSpec(), 2);
  MissionConfig cfg = fastMission(0.0);
  EXPECT_TRUE(runMission(w, cfg).log.metrics.empty());
  GroundTruthWorld blocked = w;
  blocked.setStart(Pose(0.05, 0.05, 0.05, 0.0));
  cfg.t_max = 1.0;
  EXPECT_THROW(runMission(blocked, cfg), Error);
  cfg.control_dt = 0.0;
  EXPECT_THROW(runMission(w, cfg), Error);
}

TEST(Mission, CollisionAbortsTheMission) {
  // Optimistic planning on walls predicted free, with a sensor too short to
  // see them first, flies into one; the first contact ends the mission.
  const GroundTruthWorld w = generateWorld(smallSpec(), 1);
  MissionConfig cfg = fastMission(60.0);
  NoiseModel n;
  n.miss_rate = 1.0;        // every wall predicted free
  n.prior_occupied = 0.05;  // ... and confidently so
  cfg.oracle = OracleMode::noisy(n);
  cfg.sensor.max_range = 0.3;
  cfg.planner.collision = CollisionMode::kOptimistic;
  cfg.fusion = FusionStrategy::kNoFusion;
  const MissionResult r = runMission(w, cfg);
  ASSERT_EQ(r.log.status, MissionStatus::kCollision);
  ASSERT_EQ(r.log.collisions.size(), 1u);
  EXPECT_TRUE(w.sphereCollides(r.log.collisions[0].pose.position, cfg.planner.collision_radius));
  EXPECT_LT(r.log.elapsed, 60.0);

  // Conservative planning on the same inputs stays safe.
  cfg.planner.collision = CollisionMode::kConservative;
  cfg.t_max = 20.0;
  EXPECT_TRUE(runMission(w, cfg).log.safe());
}

TEST(Mission, ReplaySnapshotsMatchTheMissionMetrics) {
  const GroundTruthWorld w = generateWorld(smallSpec(), 3);
  const MissionConfig cfg = fastMission(9.0);
  const MissionResult r = runMission(w, cfg);
  const ObservableSpace space = ObservableSpace::compute(w, w.start().position);
  const auto snaps = replaySnapshots(r.log.stream, w, cfg.fusion, cfg, space);
  ASSERT_EQ(snaps.size(), r.log.metrics.size());
  for (size_t i = 0; i < snaps.size(); ++i) {
    if (i + 1 < snaps.size()) {
      EXPECT_EQ(snaps[i].t, r.log.metrics[i].t);
    }
    EXPECT_EQ(snaps[i].n_explored, r.log.metrics[i].n_explored) << i;
    EXPECT_EQ(snaps[i].n_correct, r.log.metrics[i].n_correct) << i;
    EXPECT_EQ(snaps[i].n_measured, r.log.metrics[i].n_measured) << i;
  }
}
