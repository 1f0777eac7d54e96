#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "voxplore/harness/commands.h"
#include "voxplore/harness/csv.h"
#include "voxplore/harness/svg_plot.h"
#include "voxplore/map_snapshot.h"

using namespace voxplore;
namespace fs = std::filesystem;

namespace {

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("voxplore_harness_" + name);
  fs::remove_all(p);
  return p;
}

ExperimentSpec tinySpec() {
  ExperimentSpec s;
  s.world.size_x = 5.0;
  s.world.size_y = 4.0;
  s.world.size_z = 2.5;
  s.world.voxel_size = 0.1;
  s.world.rooms = 2;
  s.world.min_room_side = 1.5;
  s.world.wall_thickness = 0.2;
  s.world.clutter_per_room = 1;
  s.mission.t_max = 8.0;
  s.mission.planner.rays = GainRayConfig{12, 8, 4};
  s.mission.expansions_per_step = 2;
  s.mission.sensor.width = 32;
  s.mission.sensor.height = 24;
  s.mission.prediction_dims = {30, 30, 25};
  s.mission.metrics_period = 2.0;
  s.mission.seed = 3;
  return s;
}

// 10^3 world with a floor slab. Start in the middle.
GroundTruthWorld slabWorld() {
  GroundTruthWorld w(GridConfig{0.1, 8}, {10, 10, 10}, Pose(0.55, 0.55, 0.55, 0.0));
  for (int y = 0; y < 10; ++y)
    for (int x = 0; x < 10; ++x) w.setLabel({x, y, 0}, static_cast<uint8_t>(SemanticClass::kFloor));
  return w;
}

// One prediction that sees the floor, then four that miss it, all with
// confident free calls.
PredictionStream missHeavyStream(const GroundTruthWorld& w) {
  PredictionStream s;
  s.voxel_size = 0.1;
  for (int k = 0; k < 5; ++k) {
    StreamRecord r;
    r.kind = StreamRecord::Kind::kPrediction;
    r.time = k;
    r.pose = w.start();
    r.prediction.voxel_size = 0.1;
    r.prediction.dims = {10, 10, 10};
    r.prediction.origin = {0, 0, 0};
    r.prediction.voxels.resize(1000);
    for (int z = 0; z < 10; ++z)
      for (int y = 0; y < 10; ++y)
        for (int x = 0; x < 10; ++x) {
          PredictedVoxel& v = r.prediction.voxels[r.prediction.offset(x, y, z)];
          const bool floor = z == 0;
          v.class_id = floor ? static_cast<uint8_t>(SemanticClass::kFloor) : 0;
          v.occupied = floor && k == 0;
          v.confidence = 0.9f;
        }
    s.records.push_back(std::move(r));
  }
  return s;
}

}  // namespace

TEST(Config, RoundTripIsLossless) {
  ExperimentSpec s = tinySpec();
  s.mission.planner.gain = GainKind::kHybrid;
  s.mission.fusion = FusionStrategy::kCounting;
  s.mission.tau = 0.3;
  s.goals = {0.25, 0.9};
  s.axes["gain"] = {"sc", "exploration"};
  const std::string text = configToString(s);
  ExperimentSpec back;
  std::istringstream in(text);
  applyConfig(back, in);
  EXPECT_EQ(configToString(back), text);
  EXPECT_EQ(back.mission.tau, 0.3);
  EXPECT_EQ(back.mission.planner.gain, GainKind::kHybrid);
  EXPECT_EQ(back.axes.at("gain").size(), 2u);
}

TEST(Config, ErrorsNameTheSource) {
  ExperimentSpec s;
  std::istringstream unversioned("t_max = 5\n");
  EXPECT_THROW(applyConfig(s, unversioned), Error);
  std::istringstream missing("# nothing\n");
  EXPECT_THROW(applyConfig(s, missing), Error);
  std::istringstream unknown("schema_version = 1\n\nno_such_key = 3\n");
  try {
    applyConfig(s, unknown, "exp.cfg");
    FAIL() << "unknown key accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("exp.cfg:3"), std::string::npos) << e.what();
  }
  // Range checks run when the spec is used, after all sources are merged.
  std::istringstream bad_value("schema_version = 1\ntau = 2\n");
  ExperimentSpec b;
  applyConfig(b, bad_value);
  EXPECT_THROW(b.validate(), Error);
  std::istringstream not_a_number("schema_version = 1\ntau = abc\n");
  EXPECT_THROW(applyConfig(s, not_a_number), Error);
  EXPECT_THROW(applyConfigFile(s, "/nonexistent/x.cfg"), Error);
}

TEST(Csv, AbsentFieldsAreEmpty) {
  EXPECT_EQ(csvField(std::nullopt), "");
  EXPECT_EQ(csvField(0.5), "0.5");
  MetricsRecord m;
  m.E = 0.25;
  std::ostringstream out;
  writeMetricsCsv({m}, out);
  const std::string text = out.str();
  EXPECT_EQ(text.substr(0, text.find('\n')), kMetricsCsvHeader);
  EXPECT_NE(text.find("0,0.25,0,0,,,,,,0,0,0"), std::string::npos) << text;
}

TEST(Svg, WellFormedAndEscaped) {
  PlotOptions o;
  o.title = "a < b & c";
  const std::string svg = renderLineChart({{"one", {{0, 0}, {1, 1}}}, {"two", {{0, 1}, {1, 0.5}}}}, o);
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  EXPECT_NE(svg.find("a &lt; b &amp; c"), std::string::npos);
  EXPECT_EQ(svg.find("a < b"), std::string::npos);
  EXPECT_NE(svg.find("<polyline"), std::string::npos);
}

TEST(Commands, RunIsByteReproducible) {
  const ExperimentSpec s = tinySpec();
  const fs::path a = scratch("run_a"), b = scratch("run_b");
  const RunSummary ra = cmdRun(s, a.string());
  const RunSummary rb = cmdRun(s, b.string());
  EXPECT_EQ(ra.stream_hash, rb.stream_hash);
  for (const char* f : {"metrics.csv", "events.csv", "predictions.log", "map.txt", "summary.json", "config.txt"}) {
    ASSERT_TRUE(fs::exists(a / f)) << f;
    EXPECT_EQ(readFile(a / f), readFile(b / f)) << f;
  }
  EXPECT_TRUE(fs::exists(a / "coverage.svg"));
  // The saved map evaluates to the run's final metrics.
  const MetricsRecord m = cmdEvalMap((a / "map.txt").string(), loadExperimentWorld(s), EvaluationSet::kAllObservable);
  EXPECT_EQ(m.E, ra.final_metrics.E);
  EXPECT_EQ(m.C, ra.final_metrics.C);
}

TEST(Commands, MissingWorldFileIsNamed) {
  ExperimentSpec s = tinySpec();
  s.world_file = "/nonexistent/world.txt";
  try {
    cmdRun(s, scratch("missing").string());
    FAIL() << "missing world accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("/nonexistent/world.txt"), std::string::npos);
  }
  EXPECT_THROW(cmdEvalMap("/nonexistent/map.txt", slabWorld(), EvaluationSet::kAllObservable), Error);
}

#ifdef VOXPLORE_CLI_PATH
TEST(Commands, CliExitsNonzeroOnMissingWorld) {
  const fs::path out = scratch("cli");
  const fs::path err = scratch("cli_err.txt");
  const std::string cmd = std::string(VOXPLORE_CLI_PATH) + " run --world /nonexistent/world.txt --output " +
                          out.string() + " 2> " + err.string();
  EXPECT_NE(std::system(cmd.c_str()), 0);
  EXPECT_NE(readFile(err).find("/nonexistent/world.txt"), std::string::npos);
  const std::string bad = std::string(VOXPLORE_CLI_PATH) + " run --no-such-flag 2> /dev/null";
  EXPECT_NE(std::system(bad.c_str()), 0);
}
#endif

TEST(Commands, BatchRunsTheMatrix) {
  ExperimentSpec s = tinySpec();
  s.mission.t_max = 3.0;
  s.repetitions = 3;
  s.axes["gain"] = {"exploration", "sc"};
  const fs::path out = scratch("batch");
  const BatchResult r = cmdBatch(s, out.string());
  EXPECT_EQ(r.cells, 2u);
  ASSERT_EQ(r.runs.size(), 6u);
  for (const BatchRun& run : r.runs) {
    EXPECT_TRUE(run.summary.has_value()) << run.error;
    EXPECT_TRUE(run.error.empty());
  }
  std::istringstream agg(readFile(out / "aggregate.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(agg, line)) ++lines;
  EXPECT_EQ(lines, 3);  // header + one per cell
  std::istringstream runs(readFile(out / "runs.csv"));
  lines = 0;
  while (std::getline(runs, line)) ++lines;
  EXPECT_EQ(lines, 7);

  s.axes.clear();
  s.axes["gain"] = {};
  EXPECT_THROW(cmdBatch(s, scratch("batch_empty").string()), Error);
}

TEST(Commands, BatchStreamsIgnoreEvaluationAxis) {
  ExperimentSpec s = tinySpec();
  s.mission.t_max = 3.0;
  s.axes["evaluation"] = {"all", "observed", "predicted"};
  const BatchResult r = cmdBatch(s, scratch("batch_eval").string());
  ASSERT_EQ(r.runs.size(), 3u);
  for (const BatchRun& run : r.runs) {
    ASSERT_TRUE(run.summary.has_value()) << run.error;
    EXPECT_EQ(run.summary->stream_hash, r.runs[0].summary->stream_hash);
  }
}

TEST(Commands, ReplayFusionComparesStrategies) {
  const GroundTruthWorld w = slabWorld();
  const fs::path dir = scratch("replay");
  fs::create_directories(dir);
  const PredictionStream stream = missHeavyStream(w);
  stream.save((dir / "stream.log").string());
  MissionConfig m;
  m.metrics_period = 1.0;  // one snapshot per prediction
  const std::vector<FusionStrategy> all{FusionStrategy::kOccupancy, FusionStrategy::kProbabilistic,
                                        FusionStrategy::kCounting, FusionStrategy::kScFusionBaseline,
                                        FusionStrategy::kNoFusion};
  const auto curves = cmdReplayFusion((dir / "stream.log").string(), w, all, m, (dir / "out").string(), true);
  ASSERT_EQ(curves.size(), 5u);
  for (const ReplayCurve& c : curves) ASSERT_EQ(c.snapshots.size(), 5u);
  const MetricsRecord& occ = curves[0].snapshots.back();
  const MetricsRecord& prob = curves[1].snapshots.back();
  // One confident floor detection outweighs four weak free votes only under
  // the occupancy rule.
  EXPECT_EQ(*occ.R_o, 1.0);
  EXPECT_EQ(*prob.R_o, 0.0);
  // Baseline never writes free voxels.
  for (const MetricsRecord& s : curves[3].snapshots) EXPECT_EQ(s.n_pred_free, 0u);
  // No fusion equals fusing the last prediction alone.
  MultiLayerMap last(w.gridConfig());
  last.sc().fuse(stream.records.back().prediction, FusionStrategy::kOccupancy, m.calibration, &last.measured());
  const MetricsRecord expect = snapshot(last, ObservableSpace::compute(w, w.start().position));
  const MetricsRecord& none = curves[4].snapshots.back();
  EXPECT_EQ(none.n_explored, expect.n_explored);
  EXPECT_EQ(none.n_correct, expect.n_correct);
  EXPECT_EQ(none.n_pred_occ, expect.n_pred_occ);
  for (const char* f : {"replay_occupancy.csv", "replay_nofusion.csv", "replay_R_o.svg"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
}

TEST(Commands, CorruptStreamNamesTheRecord) {
  const GroundTruthWorld w = slabWorld();
  const fs::path dir = scratch("corrupt");
  fs::create_directories(dir);
  std::string text = missHeavyStream(w).toString();
  // Truncate inside the third record.
  size_t pos = 0;
  for (int i = 0; i < 5; ++i) pos = text.find('\n', pos) + 1;
  text = text.substr(0, pos + 20) + "\n";
  { std::ofstream(dir / "bad.log") << text; }
  try {
    cmdReplayFusion((dir / "bad.log").string(), w, {FusionStrategy::kOccupancy}, MissionConfig{},
                    (dir / "out").string(), false);
    FAIL() << "corrupt stream accepted";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("record 2"), std::string::npos) << e.what();
  }
}

TEST(Commands, GenWorldAndEvalMap) {
  const fs::path dir = scratch("genworld");
  fs::create_directories(dir);
  const ExperimentSpec s = tinySpec();
  cmdGenWorld(s.world, 5, (dir / "w.txt").string());
  const GroundTruthWorld w = loadWorld((dir / "w.txt").string());
  EXPECT_EQ(w, generateWorld(s.world, 5));
  const MultiLayerMap empty(w.gridConfig());
  saveMapSnapshot(empty, (dir / "m.txt").string());
  const MetricsRecord m = cmdEvalMap((dir / "m.txt").string(), w, EvaluationSet::kAllObservable);
  EXPECT_EQ(m.E, 0.0);
  const MultiLayerMap coarse(GridConfig{0.2, 8});
  saveMapSnapshot(coarse, (dir / "coarse.txt").string());
  EXPECT_THROW(cmdEvalMap((dir / "coarse.txt").string(), w, EvaluationSet::kAllObservable), Error);
}
