#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "voxplore/random.h"
#include "voxplore/sc_oracle.h"
#include "voxplore/world.h"

using namespace voxplore;

namespace {

// 30 x 30 x 12 box with random clutter at the given density.
GroundTruthWorld randomWorld(double density, uint64_t seed) {
  GroundTruthWorld w(GridConfig{0.1, 8}, {30, 30, 12}, Pose(1.55, 1.55, 0.55, 0.0));
  Rng rng(seed);
  for (int z = 0; z < 12; ++z)
    for (int y = 0; y < 30; ++y)
      for (int x = 0; x < 30; ++x) {
        if (rng.bernoulli(density)) w.setLabel({x, y, z}, static_cast<uint8_t>(SemanticClass::kSofa));
      }
  return w;
}

}  // namespace

TEST(ScOracle, PerfectPredictionEqualsGroundTruth) {
  const GroundTruthWorld w = randomWorld(0.2, 1);
  const std::array<int, 3> dims{10, 8, 12};
  const Prediction p = predict(Pose(1.55, 1.55, 0.55, 0.0), w, OracleMode::perfect(), dims);
  ASSERT_EQ(p.voxels.size(), p.volume());
  EXPECT_EQ(p.origin, (VoxelIndex{15, 11, 0}));
  for (int k = 0; k < dims[2]; ++k)
    for (int j = 0; j < dims[1]; ++j)
      for (int i = 0; i < dims[0]; ++i) {
        const PredictedVoxel& v = p.voxels[p.offset(i, j, k)];
        const VoxelIndex g = p.globalIndex(i, j, k);
        ASSERT_EQ(v.occupied, w.label(g) != 0);
        ASSERT_EQ(v.class_id, w.label(g));
        ASSERT_EQ(v.confidence, 1.0f);
      }
}

TEST(ScOracle, OriginFollowsSnappedYaw) {
  const GroundTruthWorld w = randomWorld(0.0, 1);
  const std::array<int, 3> d{10, 8, 6};
  const Pose base(1.55, 1.55, 0.55, 0.0);  // camera voxel (15, 15, 5)
  EXPECT_EQ(predictionOrigin(base, w, d), (VoxelIndex{15, 11, 0}));
  EXPECT_EQ(predictionOrigin(Pose(base.position, 0.3), w, d), (VoxelIndex{15, 11, 0}));
  EXPECT_EQ(predictionOrigin(Pose(base.position, std::numbers::pi / 2), w, d), (VoxelIndex{10, 15, 0}));
  EXPECT_EQ(predictionOrigin(Pose(base.position, -std::numbers::pi), w, d), (VoxelIndex{6, 11, 0}));
  EXPECT_EQ(predictionOrigin(Pose(base.position, -std::numbers::pi / 2), w, d), (VoxelIndex{10, 8, 0}));
}

TEST(ScOracle, OutsideWorldReadsFreeAndOutsidePoseThrows) {
  const GroundTruthWorld w = randomWorld(1.0, 1);
  const Prediction p = predict(Pose(2.95, 1.55, 0.55, 0.0), w, OracleMode::perfect(), {4, 2, 2});
  EXPECT_TRUE(p.voxels[p.offset(0, 0, 0)].occupied);   // x = 29 inside
  EXPECT_FALSE(p.voxels[p.offset(1, 0, 0)].occupied);  // x = 30 outside
  EXPECT_THROW(predict(Pose(3.5, 1.0, 0.5, 0.0), w, OracleMode::perfect(), {4, 2, 2}), Error);
}

TEST(ScOracle, NoisyRatesMatchModel) {
  // World seed kept apart from the noise seeds below.
  const GroundTruthWorld w = randomWorld(0.3, 1000);
  NoiseModel n;
  n.miss_rate = 0.2;
  n.hallucination_rate = 0.1;
  size_t occ = 0, missed = 0, fre = 0, halluc = 0;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    n.seed = seed;
    const Prediction p = predict(Pose(0.05, 1.55, 0.55, 0.0), w, OracleMode::noisy(n), {30, 30, 12});
    for (int k = 0; k < 12; ++k)
      for (int j = 0; j < 30; ++j)
        for (int i = 0; i < 30; ++i) {
          const VoxelIndex g = p.globalIndex(i, j, k);
          if (!w.contains(g)) continue;
          const bool gt = w.occupied(g);
          const bool em = p.voxels[p.offset(i, j, k)].occupied;
          if (gt) ++occ, missed += !em;
          else ++fre, halluc += em;
        }
  }
  const double m = double(missed) / occ, h = double(halluc) / fre;
  EXPECT_NEAR(m, 0.2, 4 * std::sqrt(0.2 * 0.8 / occ));
  EXPECT_NEAR(h, 0.1, 4 * std::sqrt(0.1 * 0.9 / fre));
}

TEST(ScOracle, TunedModelHitsTargetsInExpectation) {
  const double f = 0.25;
  const NoiseModel n = NoiseModel::tuned(0.568, 0.934, f, 3);
  const double recall = 1.0 - n.miss_rate;
  const double precision = recall * f / (recall * f + n.hallucination_rate * (1 - f));
  EXPECT_NEAR(recall, 0.934, 1e-12);
  EXPECT_NEAR(precision, 0.568, 1e-12);
  EXPECT_NEAR(n.occupiedConfidence(), 0.568, 1e-6);
  // Free confidence: posterior that an emitted free voxel is free.
  const double pf = (1 - n.hallucination_rate) * (1 - f) / ((1 - n.hallucination_rate) * (1 - f) + n.miss_rate * f);
  EXPECT_NEAR(n.freeConfidence(), pf, 1e-6);
  EXPECT_THROW(NoiseModel::tuned(0.01, 0.99, 0.5), Error);
}

TEST(ScOracle, SeedDeterminismAndCorrelation) {
  const GroundTruthWorld w = randomWorld(0.3, 4);
  NoiseModel n;
  n.miss_rate = 0.3;
  n.hallucination_rate = 0.3;
  n.seed = 9;
  const Pose pose(0.05, 1.55, 0.55, 0.0);
  EXPECT_EQ(predict(pose, w, OracleMode::noisy(n), {12, 12, 12}), predict(pose, w, OracleMode::noisy(n), {12, 12, 12}));
  NoiseModel other = n;
  other.seed = 10;
  EXPECT_NE(predict(pose, w, OracleMode::noisy(n), {12, 12, 12}), predict(pose, w, OracleMode::noisy(other), {12, 12, 12}));
  // Correlated mode draws once per 4^3 cell. Miss and hallucination
  // rates are equal here, so every voxel of a cell flips or none does.
  n.correlated = true;
  const Prediction p = predict(pose, w, OracleMode::noisy(n), {12, 12, 12});
  const VoxelIndex o = p.origin;  // (0, 9, 0): the cell x 0..3, y 12..15, z 0..3 lies inside
  ASSERT_EQ(o, (VoxelIndex{0, 9, 0}));
  auto flipped = [&](int x, int y, int z) {
    const PredictedVoxel& v = p.voxels[p.offset(x - int(o.x), y - int(o.y), z - int(o.z))];
    return v.occupied != w.occupied({x, y, z});
  };
  const bool first = flipped(0, 12, 0);
  for (int z = 0; z < 4; ++z)
    for (int y = 12; y < 16; ++y)
      for (int x = 0; x < 4; ++x) EXPECT_EQ(flipped(x, y, z), first);
}

TEST(ScOracle, ValidationRejectsBadRates) {
  NoiseModel n;
  n.miss_rate = 1.5;
  EXPECT_THROW(n.validate(), Error);
  n = NoiseModel{};
  n.prior_occupied = 0.0;
  EXPECT_THROW(n.validate(), Error);
  EXPECT_EQ(oracleKindFromString("noisy"), OracleKind::kNoisy);
  EXPECT_THROW(oracleKindFromString("x"), Error);
}
