#include <benchmark/benchmark.h>

#include "voxplore/mission.h"
#include "voxplore/planner/visibility.h"
#include "voxplore/ray_traversal.h"
#include "voxplore/render.h"
#include "voxplore/world.h"

using namespace voxplore;

namespace {

WorldSpec benchWorld() {
  WorldSpec s;
  s.size_x = 10.0;
  s.size_y = 8.0;
  s.size_z = 2.5;
  s.rooms = 3;
  return s;
}

const GroundTruthWorld& world() {
  static const GroundTruthWorld w = generateWorld(benchWorld(), 1);
  return w;
}

// Map after a short mission, so gain evaluation sees all three voxel kinds.
const MultiLayerMap& exploredMap() {
  static const MultiLayerMap m = [] {
    MissionConfig cfg;
    cfg.t_max = 15.0;
    cfg.planner.rays = GainRayConfig{16, 12, 4};
    cfg.expansions_per_step = 2;
    return runMission(world(), cfg).map;
  }();
  return m;
}

}  // namespace

static void BM_WalkRay(benchmark::State& state) {
  const double range = static_cast<double>(state.range(0));
  size_t n = 0;
  for (auto _ : state) {
    walkRay(Point(0.013, 0.021, 0.037), Point(0.6, 0.5, 0.3), range, 0.08, [&](const RayStep&) {
      ++n;
      return true;
    });
  }
  benchmark::DoNotOptimize(n);
  state.SetItemsProcessed(static_cast<int64_t>(n));
}
BENCHMARK(BM_WalkRay)->Arg(1)->Arg(5)->Arg(20);

static void BM_RenderDepth(benchmark::State& state) {
  const SensorModel sensor;
  for (auto _ : state) benchmark::DoNotOptimize(renderDepth(world().start(), world(), sensor));
}
BENCHMARK(BM_RenderDepth)->Unit(benchmark::kMillisecond);

static void BM_IntegrateDepth(benchmark::State& state) {
  const SensorModel sensor;
  const DepthImage depth = renderDepth(world().start(), world(), sensor);
  MeasuredLayer layer(world().gridConfig());
  for (auto _ : state) layer.integrateDepth(world().start(), depth, sensor);
}
BENCHMARK(BM_IntegrateDepth)->Unit(benchmark::kMillisecond);

static void BM_OptimizeYaw(benchmark::State& state) {
  const GainRayConfig rays{static_cast<int>(state.range(0)), static_cast<int>(state.range(1)), 8};
  GainEvaluator eval(SensorModel{}, rays, world().bounds());
  const MultiLayerMap& map = exploredMap();
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval.optimizeYaw(world().start().position, map, GainKind::kHybrid, RaycastMode::kNonBlocking));
  }
}
BENCHMARK(BM_OptimizeYaw)->Args({24, 16})->Args({64, 48})->Unit(benchmark::kMillisecond);

static void BM_Fuse(benchmark::State& state) {
  const auto strategy = static_cast<FusionStrategy>(state.range(0));
  const Prediction p = predict(world().start(), world(), OracleMode::perfect(), Prediction::kDefaultDims);
  const ClassCalibration calib = ClassCalibration::defaults();
  MultiLayerMap map(world().gridConfig());
  for (auto _ : state) map.sc().fuse(p, strategy, calib, &map.measured());
  state.SetLabel(toString(strategy));
  state.SetItemsProcessed(static_cast<int64_t>(state.iterations() * p.volume()));
}
BENCHMARK(BM_Fuse)->DenseRange(0, 4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
