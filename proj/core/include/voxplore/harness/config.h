#pragma once

#include <functional>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "voxplore/mission.h"

namespace voxplore {

/// Everything one experiment needs: where the world comes from, the mission
/// configuration, repetitions and seeds, and where artifacts go.
struct ExperimentSpec {
  std::string world_file;  // empty: generate from `world`
  WorldSpec world;
  uint64_t world_seed = 1;
  MissionConfig mission;
  int repetitions = 1;
  std::string output_dir = "voxplore-out";
  std::vector<double> goals{0.5, 0.8};  // thresholds reported as T_M / T_C
  bool svg = true;
  int jobs = 1;
  /// Batch axes: config key -> values, cells are the cartesian product.
  std::map<std::string, std::vector<std::string>> axes;

  void validate() const;
};

/// One configuration key. The same name is used in config files
/// (`name = value`) and on the command line (`--name value`).
struct ConfigKey {
  std::string name;
  std::string help;
  std::function<std::string(const ExperimentSpec&)> get;
  std::function<void(ExperimentSpec&, const std::string&)> set;
};

/// All keys, in the order they are written to config files.
const std::vector<ConfigKey>& configKeys();
const ConfigKey* findConfigKey(const std::string& name);

/// Sets one key; throws Error naming the key on a bad value.
void setConfigValue(ExperimentSpec& spec, const std::string& key, const std::string& value);

constexpr int kConfigSchemaVersion = 1;

/// Config text: `#` comments, blank lines, and `key = value` lines.
/// `schema_version = 1` must appear before any other key. `axis.<key> = a,b`
/// adds a batch axis. Unknown keys are errors.
void applyConfig(ExperimentSpec& spec, std::istream& in, const std::string& source = "<config>");
void applyConfigFile(ExperimentSpec& spec, const std::string& path);

/// Writes every key (and the axes), so reading the text back into a default
/// spec reproduces `spec` exactly.
void writeConfig(const ExperimentSpec& spec, std::ostream& out);
std::string configToString(const ExperimentSpec& spec);

/// Applies VOXPLORE_OUTPUT_DIR and VOXPLORE_JOBS when set.
void applyEnvironment(ExperimentSpec& spec);

}  // namespace voxplore
