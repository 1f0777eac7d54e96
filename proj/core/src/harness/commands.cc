#include "voxplore/harness/commands.h"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "voxplore/format.h"
#include "voxplore/harness/csv.h"
#include "voxplore/harness/svg_plot.h"
#include "voxplore/map_snapshot.h"

namespace voxplore {

namespace fs = std::filesystem;

namespace {

void ensureDir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create directory '" + dir + "': " + ec.message());
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

Series seriesOf(const std::vector<MetricsRecord>& records, double MetricsRecord::*field) {
  Series s;
  for (const MetricsRecord& r : records) s.emplace_back(r.t, r.*field);
  return s;
}

nlohmann::ordered_json optionalJson(const std::optional<double>& v) {
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

std::string goalName(double g) {
  // 0.8 -> "80"
  return formatDouble(std::round(g * 1e6) / 1e4);
}

// Metrics reported per run and aggregated per cell.
struct NamedMetric {
  std::string name;
  std::function<std::optional<double>(const RunSummary&)> get;
};

std::vector<NamedMetric> batchMetrics(const std::vector<double>& goals) {
  std::vector<NamedMetric> out{
      {"E", [](const RunSummary& s) { return std::optional<double>(s.final_metrics.E); }},
      {"C", [](const RunSummary& s) { return std::optional<double>(s.final_metrics.C); }},
      {"M", [](const RunSummary& s) { return std::optional<double>(s.final_metrics.M); }},
      {"P", [](const RunSummary& s) { return s.final_metrics.P; }},
      {"P_o", [](const RunSummary& s) { return s.final_metrics.P_o; }},
      {"P_f", [](const RunSummary& s) { return s.final_metrics.P_f; }},
      {"R_o", [](const RunSummary& s) { return s.final_metrics.R_o; }},
      {"R_f", [](const RunSummary& s) { return s.final_metrics.R_f; }},
      {"expected_E", [](const RunSummary& s) { return std::optional<double>(s.expected_E); }},
      {"expected_C", [](const RunSummary& s) { return std::optional<double>(s.expected_C); }},
      {"expected_M", [](const RunSummary& s) { return std::optional<double>(s.expected_M); }},
      {"collisions", [](const RunSummary& s) { return std::optional<double>(static_cast<double>(s.collisions)); }},
      {"elapsed", [](const RunSummary& s) { return std::optional<double>(s.elapsed); }},
  };
  for (size_t g = 0; g < goals.size(); ++g) {
    const std::string n = goalName(goals[g]);
    out.push_back({"T_E_" + n, [g](const RunSummary& s) { return s.t_explored[g]; }});
    out.push_back({"T_C_" + n, [g](const RunSummary& s) { return s.t_correct[g]; }});
    out.push_back({"T_M_" + n, [g](const RunSummary& s) { return s.t_measured[g]; }});
  }
  return out;
}

std::string csvQuote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string hexHash(uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

GroundTruthWorld loadExperimentWorld(const ExperimentSpec& spec) {
  if (!spec.world_file.empty()) {
    if (!fs::exists(spec.world_file)) throw Error("world file '" + spec.world_file + "' does not exist");
    return loadWorld(spec.world_file);
  }
  return generateWorld(spec.world, spec.world_seed);
}

void writeSummaryJson(const RunSummary& s, const std::vector<double>& goals, std::ostream& out) {
  nlohmann::ordered_json j;
  j["status"] = toString(s.status);
  j["elapsed"] = s.elapsed;
  j["collisions"] = s.collisions;
  j["planner_events"] = s.planner_events;
  const MetricsRecord& m = s.final_metrics;
  j["final"] = {{"t", m.t},        {"E", m.E},          {"C", m.C},          {"M", m.M},
                {"P", optionalJson(m.P)}, {"P_o", optionalJson(m.P_o)}, {"P_f", optionalJson(m.P_f)},
                {"R_o", optionalJson(m.R_o)}, {"R_f", optionalJson(m.R_f)}};
  j["expected"] = {{"E", s.expected_E}, {"C", s.expected_C}, {"M", s.expected_M}};
  nlohmann::ordered_json ttg = nlohmann::ordered_json::object();
  for (size_t g = 0; g < goals.size(); ++g) {
    const std::string n = goalName(goals[g]);
    ttg["T_E=" + n] = optionalJson(s.t_explored[g]);
    ttg["T_C=" + n] = optionalJson(s.t_correct[g]);
    ttg["T_M=" + n] = optionalJson(s.t_measured[g]);
  }
  j["time_to_goal"] = ttg;
  j["stream_hash"] = s.stream_hash;
  out << j.dump(2) << '\n';
}

RunSummary cmdRun(const ExperimentSpec& spec, const std::string& out_dir) {
  spec.validate();
  return cmdRun(spec, loadExperimentWorld(spec), out_dir);
}

RunSummary cmdRun(const ExperimentSpec& spec, const GroundTruthWorld& world, const std::string& out_dir) {
  spec.validate();
  ensureDir(out_dir);
  const MissionResult result = runMission(world, spec.mission);
  const MissionLog& log = result.log;

  RunSummary s;
  s.status = log.status;
  s.elapsed = log.elapsed;
  s.collisions = log.collisions.size();
  s.planner_events = log.events.size();
  const std::string stream_text = log.stream.toString();
  s.stream_hash = hexHash(fnv1a(stream_text));
  if (!log.metrics.empty()) {
    s.final_metrics = log.metrics.back();
    const Series E = seriesOf(log.metrics, &MetricsRecord::E);
    const Series C = seriesOf(log.metrics, &MetricsRecord::C);
    const Series M = seriesOf(log.metrics, &MetricsRecord::M);
    const double t1 = log.metrics.back().t;
    if (t1 > 0.0) {
      s.expected_E = expectedPerformance(E, 0.0, t1);
      s.expected_C = expectedPerformance(C, 0.0, t1);
      s.expected_M = expectedPerformance(M, 0.0, t1);
    } else {
      s.expected_E = E.front().second, s.expected_C = C.front().second, s.expected_M = M.front().second;
    }
    for (double g : spec.goals) {
      s.t_explored.push_back(timeToGoal(E, g));
      s.t_correct.push_back(timeToGoal(C, g));
      s.t_measured.push_back(timeToGoal(M, g));
    }
  } else {
    s.t_explored.assign(spec.goals.size(), std::nullopt);
    s.t_correct.assign(spec.goals.size(), std::nullopt);
    s.t_measured.assign(spec.goals.size(), std::nullopt);
  }

  {
    std::ostringstream out;
    writeMetricsCsv(log.metrics, out);
    writeTextFile(join(out_dir, "metrics.csv"), out.str());
  }
  {
    std::ostringstream out;
    writeEventsCsv(log.events, out);
    writeTextFile(join(out_dir, "events.csv"), out.str());
  }
  {
    std::ostringstream out;
    out << "t,x,y,z,yaw\n";
    for (const CollisionEvent& c : log.collisions) {
      out << formatDouble(c.t) << ',' << formatDouble(c.pose.x()) << ',' << formatDouble(c.pose.y()) << ','
          << formatDouble(c.pose.z()) << ',' << formatDouble(c.pose.yaw) << '\n';
    }
    writeTextFile(join(out_dir, "collisions.csv"), out.str());
  }
  writeTextFile(join(out_dir, "predictions.log"), stream_text);
  saveMapSnapshot(result.map, join(out_dir, "map.txt"));
  writeTextFile(join(out_dir, "config.txt"), configToString(spec));
  {
    std::ostringstream out;
    writeSummaryJson(s, spec.goals, out);
    writeTextFile(join(out_dir, "summary.json"), out.str());
  }
  if (spec.svg) {
    std::vector<PlotSeries> series{{"E", seriesOf(log.metrics, &MetricsRecord::E)},
                                   {"C", seriesOf(log.metrics, &MetricsRecord::C)},
                                   {"M", seriesOf(log.metrics, &MetricsRecord::M)}};
    PlotOptions o;
    o.title = std::string("coverage, gain ") + toString(spec.mission.planner.gain);
    o.y_label = "fraction of observable space";
    o.y_range = std::make_pair(0.0, 1.0);
    writeTextFile(join(out_dir, "coverage.svg"), renderLineChart(series, o));
  }
  return s;
}

BatchResult cmdBatch(const ExperimentSpec& spec, const std::string& out_dir) {
  spec.validate();
  BatchResult result;
  std::vector<std::vector<std::string>> cells{{}};
  for (const auto& [key, values] : spec.axes) {
    result.axes.push_back(key);
    std::vector<std::vector<std::string>> next;
    for (const auto& prefix : cells) {
      for (const std::string& v : values) {
        next.push_back(prefix);
        next.back().push_back(v);
      }
    }
    cells = std::move(next);
  }
  if (cells.empty() || spec.repetitions < 1) throw Error("batch: empty experiment matrix");
  result.cells = cells.size();
  ensureDir(out_dir);

  for (size_t c = 0; c < cells.size(); ++c) {
    for (int rep = 0; rep < spec.repetitions; ++rep) {
      BatchRun run;
      run.cell = c;
      run.repetition = rep;
      run.values = cells[c];
      result.runs.push_back(std::move(run));
    }
  }

  std::atomic<size_t> next{0};
  auto worker = [&]() {
    for (size_t i = next++; i < result.runs.size(); i = next++) {
      BatchRun& run = result.runs[i];
      try {
        ExperimentSpec cell = spec;
        cell.axes.clear();
        cell.repetitions = 1;
        for (size_t a = 0; a < result.axes.size(); ++a) setConfigValue(cell, result.axes[a], run.values[a]);
        cell.world_seed = spec.world_seed + static_cast<uint64_t>(run.repetition);
        cell.mission.seed = spec.mission.seed + static_cast<uint64_t>(run.repetition);
        char name[64];
        std::snprintf(name, sizeof(name), "cell%03zu_rep%03d", run.cell, run.repetition);
        run.summary = cmdRun(cell, join(out_dir, name));
      } catch (const std::exception& e) {
        run.error = e.what();
      }
    }
  };
  const int jobs = std::max(1, spec.jobs);
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int j = 0; j < jobs; ++j) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
  }

  const std::vector<NamedMetric> metrics = batchMetrics(spec.goals);
  std::ostringstream runs;
  runs << "cell,repetition";
  for (const std::string& a : result.axes) runs << ',' << csvQuote(a);
  runs << ",status,stream_hash";
  for (const NamedMetric& m : metrics) runs << ',' << m.name;
  runs << ",error\n";
  for (const BatchRun& r : result.runs) {
    runs << r.cell << ',' << r.repetition;
    for (const std::string& v : r.values) runs << ',' << csvQuote(v);
    if (r.summary) {
      runs << ',' << toString(r.summary->status) << ',' << r.summary->stream_hash;
      for (const NamedMetric& m : metrics) runs << ',' << csvField(m.get(*r.summary));
      runs << ",\n";
    } else {
      runs << ",error,";
      for (size_t m = 0; m < metrics.size(); ++m) runs << ',';
      runs << ',' << csvQuote(r.error) << '\n';
    }
  }
  writeTextFile(join(out_dir, "runs.csv"), runs.str());

  // Mean and sample standard deviation over the runs of a cell that produced
  // the metric; summation follows repetition order, not completion order.
  std::ostringstream agg;
  agg << "cell";
  for (const std::string& a : result.axes) agg << ',' << csvQuote(a);
  agg << ",runs,failed";
  for (const NamedMetric& m : metrics) agg << ',' << m.name << "_mean," << m.name << "_std," << m.name << "_n";
  agg << '\n';
  for (size_t c = 0; c < cells.size(); ++c) {
    std::vector<const BatchRun*> members;
    size_t failed = 0;
    for (const BatchRun& r : result.runs) {
      if (r.cell != c) continue;
      members.push_back(&r);
      if (!r.summary) ++failed;
    }
    agg << c;
    for (const std::string& v : cells[c]) agg << ',' << csvQuote(v);
    agg << ',' << members.size() << ',' << failed;
    for (const NamedMetric& m : metrics) {
      std::vector<double> xs;
      for (const BatchRun* r : members) {
        if (!r->summary) continue;
        if (auto v = m.get(*r->summary)) xs.push_back(*v);
      }
      std::optional<double> mean, sd;
      if (!xs.empty()) {
        double sum = 0.0;
        for (double x : xs) sum += x;
        mean = sum / static_cast<double>(xs.size());
        double ss = 0.0;
        for (double x : xs) ss += (x - *mean) * (x - *mean);
        sd = xs.size() > 1 ? std::sqrt(ss / static_cast<double>(xs.size() - 1)) : 0.0;
      }
      agg << ',' << csvField(mean) << ',' << csvField(sd) << ',' << xs.size();
    }
    agg << '\n';
  }
  writeTextFile(join(out_dir, "aggregate.csv"), agg.str());
  return result;
}

std::vector<ReplayCurve> cmdReplayFusion(const std::string& stream_path, const GroundTruthWorld& world,
                                         const std::vector<FusionStrategy>& strategies,
                                         const MissionConfig& mission, const std::string& out_dir,
                                         bool svg) {
  if (strategies.empty()) throw Error("replay-fusion: no strategies given");
  const PredictionStream stream = PredictionStream::load(stream_path);
  const ObservableSpace space = ObservableSpace::compute(world, world.start().position);
  ensureDir(out_dir);

  std::vector<ReplayCurve> curves;
  for (FusionStrategy strategy : strategies) {
    ReplayCurve curve;
    curve.strategy = strategy;
    curve.snapshots = replaySnapshots(stream, world, strategy, mission, space);
    std::ostringstream out;
    writeMetricsCsv(curve.snapshots, out);
    writeTextFile(join(out_dir, std::string("replay_") + toString(strategy) + ".csv"), out.str());
    curves.push_back(std::move(curve));
  }

  if (svg) {
    for (auto [name, field] : {std::pair{"R_o", &MetricsRecord::R_o}, std::pair{"P", &MetricsRecord::P},
                               std::pair{"P_o", &MetricsRecord::P_o}}) {
      std::vector<PlotSeries> series;
      for (const ReplayCurve& c : curves) {
        PlotSeries s{toString(c.strategy), {}};
        for (const MetricsRecord& m : c.snapshots) {
          if (m.*field) s.points.emplace_back(m.t, *(m.*field));
        }
        series.push_back(std::move(s));
      }
      PlotOptions o;
      o.title = std::string(name) + " per fusion strategy";
      o.y_label = name;
      o.y_range = std::make_pair(0.0, 1.0);
      writeTextFile(join(out_dir, std::string("replay_") + name + ".svg"), renderLineChart(series, o));
    }
  }
  return curves;
}

void cmdGenWorld(const WorldSpec& spec, uint64_t seed, const std::string& path) {
  spec.validate();
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) ensureDir(parent.string());
  saveWorld(generateWorld(spec, seed), path);
}

MetricsRecord cmdEvalMap(const std::string& map_path, const GroundTruthWorld& world, EvaluationSet set) {
  if (!fs::exists(map_path)) throw Error("map snapshot '" + map_path + "' does not exist");
  const MultiLayerMap map = loadMapSnapshot(map_path);
  if (!(map.measured().gridConfig() == world.gridConfig())) {
    throw Error("eval-map: map and world voxel sizes differ");
  }
  const ObservableSpace space = ObservableSpace::compute(world, world.start().position);
  return snapshot(map, space, 0, set);
}

}  // namespace voxplore
