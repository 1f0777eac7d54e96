#include <gtest/gtest.h>

#include "oracles/oracles.h"
#include "voxplore/metrics.h"

using namespace voxplore;

namespace {

// Ten evaluable voxels in a row: occupied ends at x = 0 and x = 9, free
// between. Start at x = 2.
GroundTruthWorld tenVoxelWorld() {
  GroundTruthWorld w(GridConfig{0.1, 8}, {10, 1, 1}, Pose(0.25, 0.05, 0.05, 0.0));
  w.setLabel({0, 0, 0}, static_cast<uint8_t>(SemanticClass::kWall));
  w.setLabel({9, 0, 0}, static_cast<uint8_t>(SemanticClass::kWall));
  return w;
}

// x0 measured occ (right), x1 x2 measured free (right), x3 measured occ
// (wrong), x4 x5 x6 predicted free (right), x7 x8 unknown, x9 predicted occ
// (right).
MultiLayerMap handMap() {
  MultiLayerMap map(GridConfig{0.1, 8});
  map.measured().update({0, 0, 0}, true);
  map.measured().update({1, 0, 0}, false);
  map.measured().update({2, 0, 0}, false);
  map.measured().update({3, 0, 0}, true);
  for (int x : {4, 5, 6}) map.sc().mutableGrid().at({x, 0, 0}).log_odds = -2.0f;
  map.sc().mutableGrid().at({9, 0, 0}).log_odds = 2.0f;
  return map;
}

}  // namespace

TEST(ObservableSpace, TenVoxelWorld) {
  const GroundTruthWorld w = tenVoxelWorld();
  const ObservableSpace s = ObservableSpace::compute(w, w.start().position);
  EXPECT_EQ(s.size(), 10u);
  EXPECT_EQ(s.occupiedCount(), 2u);
  EXPECT_THROW(ObservableSpace::compute(w, Point(0.05, 0.05, 0.05)), Error);
}

TEST(ObservableSpace, HollowBoxAndSealedRooms) {
  // 7^3 shell of thickness 2 around a 3^3 cavity, next to a sealed cavity.
  GroundTruthWorld w(GridConfig{0.1, 8}, {14, 7, 7}, Pose(0.35, 0.35, 0.35, 0.0));
  for (int z = 0; z < 7; ++z)
    for (int y = 0; y < 7; ++y)
      for (int x = 0; x < 14; ++x) {
        const bool cavity_a = x >= 2 && x < 5 && y >= 2 && y < 5 && z >= 2 && z < 5;
        const bool cavity_b = x >= 9 && x < 12 && y >= 2 && y < 5 && z >= 2 && z < 5;
        if (!cavity_a && !cavity_b) w.setLabel({x, y, z}, 2);
      }
  const ObservableSpace s = ObservableSpace::compute(w, w.start().position);
  // 27 cavity voxels plus 6 faces of 9 shell voxels; edges and corners excluded.
  EXPECT_EQ(s.size(), 27u + 54u);
  EXPECT_EQ(s.occupiedCount(), 54u);
  for (const VoxelIndex& v : s.voxels) EXPECT_LT(v.x, 7);
}

TEST(ObservableSpace, MatchesBfsOracle) {
  WorldSpec spec;
  spec.size_x = 6;
  spec.size_y = 5;
  spec.size_z = 2.5;
  spec.voxel_size = 0.1;
  spec.rooms = 3;
  spec.min_room_side = 1.5;
  const GroundTruthWorld w = generateWorld(spec, 7);
  oracle::DenseGrid g;
  g.nx = int(w.dims()[0]), g.ny = int(w.dims()[1]), g.nz = int(w.dims()[2]);
  g.occ.resize(w.volume());
  for (int z = 0; z < g.nz; ++z)
    for (int y = 0; y < g.ny; ++y)
      for (int x = 0; x < g.nx; ++x) g.occ[x + g.nx * (y + g.ny * z)] = w.occupied({x, y, z});
  const auto expected = oracle::observableByBfs(g, worldToIndex(w.start().position, w.gridConfig()));
  const ObservableSpace s = ObservableSpace::compute(w, w.start().position);
  ASSERT_EQ(s.size(), expected.size());
  EXPECT_TRUE(std::equal(s.voxels.begin(), s.voxels.end(), expected.begin()));
  for (size_t i = 0; i < s.size(); ++i) EXPECT_EQ(s.occupied[i] != 0, w.occupied(s.voxels[i]));
}

TEST(Snapshot, HandComputedTenVoxelWorld) {
  const GroundTruthWorld w = tenVoxelWorld();
  const ObservableSpace s = ObservableSpace::compute(w, w.start().position);
  const MetricsRecord r = snapshot(handMap(), s, 0);
  EXPECT_EQ(r.E, 0.8);
  EXPECT_EQ(r.C, 0.7);
  EXPECT_EQ(r.M, 0.4);
  EXPECT_EQ(*r.P, 0.875);
  EXPECT_EQ(*r.P_o, 2.0 / 3.0);
  EXPECT_EQ(*r.P_f, 1.0);
  EXPECT_EQ(*r.R_o, 1.0);
  EXPECT_EQ(*r.R_f, 5.0 / 6.0);

  const MetricsRecord p = snapshot(handMap(), s, 0, EvaluationSet::kPredictedOnly);
  EXPECT_EQ(p.n_total, 6u);
  EXPECT_EQ(p.E, 4.0 / 6.0);
  EXPECT_EQ(p.M, 0.0);
  EXPECT_EQ(*p.P, 1.0);
  EXPECT_EQ(*p.R_o, 1.0);

  const MetricsRecord o = snapshot(handMap(), s, 0, EvaluationSet::kObservedOnly);
  EXPECT_EQ(o.n_total, 4u);
  EXPECT_EQ(o.C, 0.75);
  EXPECT_EQ(*o.P_o, 0.5);
}

TEST(Snapshot, EmptyAndPerfectMaps) {
  const GroundTruthWorld w = tenVoxelWorld();
  const ObservableSpace s = ObservableSpace::compute(w, w.start().position);
  const MetricsRecord empty = snapshot(MultiLayerMap(GridConfig{0.1, 8}), s);
  EXPECT_EQ(empty.E, 0.0);
  EXPECT_FALSE(empty.P.has_value());
  EXPECT_FALSE(empty.R_o.has_value());
  MultiLayerMap perfect(GridConfig{0.1, 8});
  for (size_t i = 0; i < s.size(); ++i) perfect.measured().update(s.voxels[i], s.occupied[i] != 0);
  const MetricsRecord r = snapshot(perfect, s);
  EXPECT_EQ(r.E, 1.0);
  EXPECT_EQ(r.C, 1.0);
  EXPECT_EQ(*r.P_o, 1.0);
  EXPECT_EQ(*r.R_f, 1.0);
  EXPECT_THROW(snapshot(MultiLayerMap(GridConfig{0.2, 8}), s), Error);
}

TEST(Tradeoff, WeightedSumOfIndependentTerms) {
  const GroundTruthWorld w = tenVoxelWorld();
  const MetricsRecord r = snapshot(handMap(), ObservableSpace::compute(w, w.start().position));
  EXPECT_EQ(tradeoffObjective(r, {1, 0, 0}, true), 0.7);
  EXPECT_EQ(tradeoffObjective(r, {0, 0, 1}, true), 1.0);
  EXPECT_DOUBLE_EQ(tradeoffObjective(r, {1, 1, 1}, true), 0.7 + 0.875 + 1.0);
  EXPECT_DOUBLE_EQ(tradeoffObjective(r, {1, 1, 1}, false), 0.7 + 0.875);
  EXPECT_THROW(tradeoffObjective(r, {0, 0, 0}, true), Error);
}

TEST(TimeToGoal, InterpolatesAndDetectsNeverReached) {
  EXPECT_EQ(*timeToGoal({{0, 0}, {10, 1}}, 0.5), 5.0);
  EXPECT_EQ(*timeToGoal({{0, 0}, {290, 0.5}, {300, 0.8}, {310, 0.9}}, 0.8), 300.0);
  EXPECT_FALSE(timeToGoal({{0, 0}, {10, 0.7}}, 0.8).has_value());
  EXPECT_EQ(*timeToGoal({{5, 0.9}, {10, 1}}, 0.8), 5.0);
  EXPECT_THROW(timeToGoal({}, 0.5), Error);
  // Monotone in the goal.
  const Series s{{0, 0}, {3, 0.2}, {7, 0.9}, {9, 1.0}};
  double prev = -1;
  for (double g = 0.0; g <= 1.0; g += 0.05) {
    const double t = *timeToGoal(s, g);
    EXPECT_GE(t, prev);
    prev = t;
  }
}

TEST(ExpectedPerformance, TrapezoidRule) {
  EXPECT_NEAR(expectedPerformance({{0, 0}, {1, 1}}, 0, 1), 0.5, 1e-12);
  EXPECT_NEAR(expectedPerformance({{0, 0.3}, {4, 0.3}}, 0, 4), 0.3, 1e-12);
  EXPECT_NEAR(expectedPerformance({{0, 0}, {2, 1}, {3, 1}}, 0, 3), 2.0 / 3.0, 1e-12);
  EXPECT_NEAR(expectedPerformance({{0, 0}, {2, 1}, {3, 1}}, 1, 3), 0.875, 1e-12);
  // Refining a piecewise-linear series changes nothing.
  EXPECT_NEAR(expectedPerformance({{0, 0}, {1, 0.5}, {2, 1}, {3, 1}}, 0, 3), 2.0 / 3.0, 1e-12);
  EXPECT_THROW(expectedPerformance({{0, 0}, {1, 1}}, 1, 1), Error);
  EXPECT_THROW(expectedPerformance({{0, 0}, {1, 1}}, 0, 2), Error);
}
