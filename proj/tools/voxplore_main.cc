// voxplore command-line front end.
//
// Precedence: built-in defaults < --config file < environment
// (VOXPLORE_OUTPUT_DIR, VOXPLORE_JOBS) < command-line flags.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "voxplore/format.h"
#include "voxplore/harness/commands.h"

namespace {

using namespace voxplore;

struct SpecFlags {
  std::string config;
  std::map<std::string, std::string> values;  // only flags that were given
  std::vector<std::string> axes;              // key=a,b
};

void addSpecFlags(CLI::App* app, SpecFlags& flags, bool with_axes) {
  app->add_option("--config", flags.config, "config file (key = value lines)")->check(CLI::ExistingFile);
  for (const ConfigKey& key : configKeys()) {
    app->add_option_function<std::string>(
        "--" + key.name, [&flags, name = key.name](const std::string& v) { flags.values[name] = v; }, key.help);
  }
  if (with_axes) {
    app->add_option("--axis", flags.axes, "batch axis, key=v1,v2,... (repeatable)");
  }
}

ExperimentSpec buildSpec(const SpecFlags& flags) {
  ExperimentSpec spec;
  if (!flags.config.empty()) applyConfigFile(spec, flags.config);
  applyEnvironment(spec);
  for (const ConfigKey& key : configKeys()) {
    auto it = flags.values.find(key.name);
    if (it != flags.values.end()) setConfigValue(spec, key.name, it->second);
  }
  for (const std::string& a : flags.axes) {
    const size_t eq = a.find('=');
    if (eq == std::string::npos) throw Error("--axis expects key=v1,v2, got '" + a + "'");
    const std::string key = a.substr(0, eq);
    if (!findConfigKey(key)) throw Error("unknown axis key '" + key + "'");
    spec.axes[key] = splitString(a.substr(eq + 1), ',');
  }
  spec.validate();
  return spec;
}

void printMetrics(const MetricsRecord& m) {
  auto opt = [](const std::optional<double>& v) { return v ? formatDouble(*v) : std::string("n/a"); };
  std::cout << "E " << formatDouble(m.E) << "\nC " << formatDouble(m.C) << "\nM " << formatDouble(m.M)
            << "\nP " << opt(m.P) << "\nP_o " << opt(m.P_o) << "\nP_f " << opt(m.P_f) << "\nR_o " << opt(m.R_o)
            << "\nR_f " << opt(m.R_f) << "\nobservable_voxels " << m.n_total << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voxplore: volumetric exploration with scene-completion fusion"};
  app.require_subcommand(1);

  SpecFlags run_flags, batch_flags, replay_flags, gen_flags, eval_flags;

  CLI::App* run = app.add_subcommand("run", "run one mission and write its artifacts");
  addSpecFlags(run, run_flags, false);

  CLI::App* batch = app.add_subcommand("batch", "run an experiment matrix and aggregate");
  addSpecFlags(batch, batch_flags, true);

  CLI::App* replay = app.add_subcommand("replay-fusion", "re-fuse a recorded prediction stream");
  std::string stream_path;
  std::vector<std::string> strategy_names{"occupancy", "probabilistic", "counting", "scfusion", "nofusion"};
  replay->add_option("--stream", stream_path, "predictions.log of a previous run")->required();
  replay->add_option("--strategies", strategy_names, "fusion strategies to compare")->delimiter(',');
  addSpecFlags(replay, replay_flags, false);

  CLI::App* gen = app.add_subcommand("gen-world", "generate a procedural world file");
  std::string world_out;
  gen->add_option("--out", world_out, "output world file")->required();
  addSpecFlags(gen, gen_flags, false);

  CLI::App* eval = app.add_subcommand("eval-map", "recompute metrics from a map snapshot");
  std::string map_path;
  eval->add_option("--snapshot", map_path, "map.txt of a previous run")->required();
  addSpecFlags(eval, eval_flags, false);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      const ExperimentSpec spec = buildSpec(run_flags);
      const RunSummary s = cmdRun(spec, spec.output_dir);
      writeSummaryJson(s, spec.goals, std::cout);
    } else if (batch->parsed()) {
      const ExperimentSpec spec = buildSpec(batch_flags);
      const BatchResult r = cmdBatch(spec, spec.output_dir);
      size_t failed = 0;
      for (const BatchRun& run_result : r.runs) {
        if (!run_result.summary) {
          ++failed;
          std::cerr << "cell " << run_result.cell << " repetition " << run_result.repetition
                    << " failed: " << run_result.error << '\n';
        }
      }
      std::cout << r.runs.size() << " runs in " << r.cells << " cells, " << failed << " failed; see "
                << spec.output_dir << "/aggregate.csv\n";
    } else if (replay->parsed()) {
      const ExperimentSpec spec = buildSpec(replay_flags);
      std::vector<FusionStrategy> strategies;
      for (const std::string& n : strategy_names) strategies.push_back(fusionStrategyFromString(n));
      const auto curves = cmdReplayFusion(stream_path, loadExperimentWorld(spec), strategies, spec.mission,
                                          spec.output_dir, spec.svg);
      for (const ReplayCurve& c : curves) {
        std::cout << toString(c.strategy) << ": " << c.snapshots.size() << " snapshots";
        if (!c.snapshots.empty() && c.snapshots.back().R_o) {
          std::cout << ", final R_o " << formatDouble(*c.snapshots.back().R_o);
        }
        std::cout << '\n';
      }
    } else if (gen->parsed()) {
      const ExperimentSpec spec = buildSpec(gen_flags);
      cmdGenWorld(spec.world, spec.world_seed, world_out);
    } else if (eval->parsed()) {
      const ExperimentSpec spec = buildSpec(eval_flags);
      printMetrics(cmdEvalMap(map_path, loadExperimentWorld(spec), spec.mission.evaluation));
    }
  } catch (const std::exception& e) {
    std::cerr << "voxplore: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
