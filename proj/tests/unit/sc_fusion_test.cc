#include <gtest/gtest.h>

#include <cmath>

#include "oracles/oracles.h"
#include "voxplore/random.h"
#include "voxplore/sc_fusion.h"

using namespace voxplore;

namespace {

constexpr uint8_t kSofa = static_cast<uint8_t>(SemanticClass::kSofa);
constexpr uint8_t kFloor = static_cast<uint8_t>(SemanticClass::kFloor);
constexpr uint8_t kFurniture = static_cast<uint8_t>(SemanticClass::kFurniture);

Prediction single(bool occupied, uint8_t cls, float conf, VoxelIndex at = {0, 0, 0}) {
  Prediction p;
  p.origin = at;
  p.dims = {1, 1, 1};
  p.voxel_size = 0.08;
  p.voxels = {PredictedVoxel{occupied, cls, conf}};
  return p;
}

}  // namespace

TEST(ScFusion, HandDerivedWeights) {
  const ClassCalibration c = ClassCalibration::defaults();
  // log((1 + 0.56) / (1 - 0.56)) = log(1.56 / 0.44)
  EXPECT_NEAR(occupancyUpdateWeight(true, kSofa, c), 1.2656663733312759, 1e-12);
  // log(1.41 / 0.59)
  EXPECT_NEAR(occupancyUpdateWeight(true, kFloor, c), 0.8712224464724487, 1e-12);
  // log(1.3 / 0.7)
  EXPECT_NEAR(occupancyUpdateWeight(true, kFurniture, c), 0.6190392084062236, 1e-12);
  EXPECT_NEAR(occupancyUpdateWeight(false, 0, c), std::log(0.49 / 0.51), 1e-12);
}

TEST(ScFusion, OccupiedIncrementNeverNegative) {
  ClassCalibration c;
  for (int i = 0; i < 100; ++i) {
    c.occupied[kSofa] = i / 100.0;
    EXPECT_GE(occupancyUpdateWeight(true, kSofa, c), 0.0);
  }
}

TEST(ScFusion, CalibrationValidation) {
  ClassCalibration c = ClassCalibration::defaults();
  c.free_probability = 0.5;
  EXPECT_THROW(c.validate(), Error);
  c = ClassCalibration::defaults();
  c.occupied[kSofa] = 1.0;
  EXPECT_THROW(c.validate(), Error);
  EXPECT_THROW(ClassCalibration{}.confidenceFor(kSofa), Error);
}

TEST(ScFusion, OccupancyRuleAccumulatesHandComputedSum) {
  ScLayer layer(GridConfig{0.08, 8});
  const ClassCalibration c = ClassCalibration::defaults();
  layer.fuse(single(true, kSofa, 0.9f), FusionStrategy::kOccupancy, c);
  layer.fuse(single(false, 0, 0.9f), FusionStrategy::kOccupancy, c);
  layer.fuse(single(true, kFurniture, 0.9f), FusionStrategy::kOccupancy, c);
  const double expected = std::log(1.56 / 0.44) + std::log(0.49 / 0.51) + std::log(1.3 / 0.7);
  EXPECT_NEAR(*layer.logOddsAt({0, 0, 0}), expected, 1e-6);
  EXPECT_FALSE(layer.logOddsAt({1, 0, 0}).has_value());
  EXPECT_EQ(layer.predictionsFused(), 3u);
}

TEST(ScFusion, ProbabilisticMatchesBayesProduct) {
  Rng rng(17);
  const ClassCalibration c = ClassCalibration::defaults();
  for (int trial = 0; trial < 200; ++trial) {
    ScLayer layer(GridConfig{0.08, 8});
    std::vector<double> ps;
    const int n = static_cast<int>(rng.uniformInt(1, 20));
    for (int i = 0; i < n; ++i) {
      const bool occ = rng.bernoulli(0.5);
      const float conf = static_cast<float>(rng.uniform(0.05, 0.95));
      layer.fuse(single(occ, kFurniture, conf), FusionStrategy::kProbabilistic, c);
      ps.push_back(occ ? double(conf) : 1.0 - double(conf));
    }
    EXPECT_NEAR(probability(*layer.logOddsAt({0, 0, 0})), oracle::bayesProduct(ps), 1e-5);
  }
}

TEST(ScFusion, CountingIsSmoothedFrequency) {
  ScLayer layer(GridConfig{0.08, 8});
  const ClassCalibration c = ClassCalibration::defaults();
  for (bool occ : {true, true, false, true}) {
    layer.fuse(single(occ, kFurniture, 0.7f), FusionStrategy::kCounting, c);
  }
  EXPECT_NEAR(probability(*layer.logOddsAt({0, 0, 0})), 3.5 / 5.0, 1e-6);
  EXPECT_EQ(layer.counts().get({0, 0, 0}).hits, 3u);
}

TEST(ScFusion, BaselineOnlyAddsOccupiedAndSkipsMeasured) {
  ScLayer layer(GridConfig{0.08, 8});
  MeasuredLayer measured(GridConfig{0.08, 8});
  measured.update({1, 0, 0}, false);
  const ClassCalibration c = ClassCalibration::defaults();
  layer.fuse(single(false, 0, 0.9f), FusionStrategy::kScFusionBaseline, c, &measured);
  EXPECT_FALSE(layer.logOddsAt({0, 0, 0}));
  layer.fuse(single(true, kSofa, 0.9f, {1, 0, 0}), FusionStrategy::kScFusionBaseline, c, &measured);
  EXPECT_FALSE(layer.logOddsAt({1, 0, 0}));
  layer.fuse(single(true, kSofa, 0.9f), FusionStrategy::kScFusionBaseline, c, &measured);
  EXPECT_NEAR(*layer.logOddsAt({0, 0, 0}), std::log(1.56 / 0.44), 1e-6);
  EXPECT_THROW(layer.fuse(single(true, kSofa, 0.9f), FusionStrategy::kScFusionBaseline, c, nullptr), Error);
}

TEST(ScFusion, NoFusionKeepsOnlyTheLast) {
  ScLayer layer(GridConfig{0.08, 8});
  const ClassCalibration c = ClassCalibration::defaults();
  layer.fuse(single(true, kSofa, 0.9f), FusionStrategy::kNoFusion, c);
  layer.fuse(single(false, 0, 0.8f), FusionStrategy::kNoFusion, c);
  EXPECT_NEAR(probability(*layer.logOddsAt({0, 0, 0})), 0.2, 1e-6);
}

TEST(ScFusion, PerfectPredictionStaysFinite) {
  ScLayer layer(GridConfig{0.08, 8});
  layer.fuse(single(true, kSofa, 1.0f), FusionStrategy::kProbabilistic, ClassCalibration::defaults());
  EXPECT_TRUE(std::isfinite(*layer.logOddsAt({0, 0, 0})));
}

TEST(ScFusion, RejectsMisalignedOrUncalibratedPredictions) {
  ScLayer layer(GridConfig{0.08, 8});
  Prediction p = single(true, kSofa, 0.9f);
  p.voxel_size = 0.1;
  EXPECT_THROW(layer.fuse(p, FusionStrategy::kOccupancy, ClassCalibration::defaults()), Error);
  p = single(true, 99, 0.9f);
  EXPECT_THROW(layer.fuse(p, FusionStrategy::kOccupancy, ClassCalibration::defaults()), Error);
  EXPECT_FALSE(layer.logOddsAt({0, 0, 0}));  // nothing touched
  p = single(true, kSofa, 0.9f);
  p.voxels.clear();
  EXPECT_THROW(layer.fuse(p, FusionStrategy::kOccupancy, ClassCalibration::defaults()), Error);
}

TEST(ScFusion, StrategyNamesRoundTrip) {
  for (auto s : {FusionStrategy::kOccupancy, FusionStrategy::kProbabilistic, FusionStrategy::kCounting,
                 FusionStrategy::kScFusionBaseline, FusionStrategy::kNoFusion}) {
    EXPECT_EQ(fusionStrategyFromString(toString(s)), s);
  }
  EXPECT_THROW(fusionStrategyFromString("bogus"), Error);
}
