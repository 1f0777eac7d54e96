#include "voxplore/harness/config.h"

#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "voxplore/format.h"

namespace voxplore {

void ExperimentSpec::validate() const {
  if (repetitions < 1) throw Error("repetitions must be >= 1");
  if (jobs < 1) throw Error("jobs must be >= 1");
  if (world_file.empty()) world.validate();
  mission.validate();
  for (const auto& [key, values] : axes) {
    if (!findConfigKey(key)) throw Error("unknown axis key '" + key + "'");
    if (values.empty()) throw Error("axis '" + key + "' has no values");
  }
}

namespace {

std::string trim(std::string_view s) {
  size_t a = 0, b = s.size();
  while (a < b && (s[a] == ' ' || s[a] == '\t' || s[a] == '\r')) ++a;
  while (b > a && (s[b - 1] == ' ' || s[b - 1] == '\t' || s[b - 1] == '\r')) --b;
  return std::string(s.substr(a, b - a));
}

[[noreturn]] void badValue(const std::string& key, const std::string& value, const char* expected) {
  throw Error("config key '" + key + "': expected " + expected + ", got '" + value + "'");
}

template <typename T>
using Ref = std::function<T&(ExperimentSpec&)>;

ConfigKey realKey(std::string name, std::string help, Ref<double> ref) {
  return {name, std::move(help),
          [ref](const ExperimentSpec& s) { return formatDouble(ref(const_cast<ExperimentSpec&>(s))); },
          [ref, name](ExperimentSpec& s, const std::string& v) {
            double d;
            if (!parseDouble(v, d) || !std::isfinite(d)) badValue(name, v, "a finite number");
            ref(s) = d;
          }};
}

template <typename Int>
ConfigKey intKey(std::string name, std::string help, Ref<Int> ref) {
  return {name, std::move(help),
          [ref](const ExperimentSpec& s) { return std::to_string(ref(const_cast<ExperimentSpec&>(s))); },
          [ref, name](ExperimentSpec& s, const std::string& v) {
            Int i;
            if (!parseInt(v, i)) badValue(name, v, "an integer");
            ref(s) = i;
          }};
}

ConfigKey boolKey(std::string name, std::string help, Ref<bool> ref) {
  return {name, std::move(help),
          [ref](const ExperimentSpec& s) { return std::string(ref(const_cast<ExperimentSpec&>(s)) ? "true" : "false"); },
          [ref, name](ExperimentSpec& s, const std::string& v) {
            if (v == "true" || v == "1") ref(s) = true;
            else if (v == "false" || v == "0") ref(s) = false;
            else badValue(name, v, "true or false");
          }};
}

ConfigKey stringKey(std::string name, std::string help, Ref<std::string> ref) {
  return {name, std::move(help),
          [ref](const ExperimentSpec& s) { return ref(const_cast<ExperimentSpec&>(s)); },
          [ref](ExperimentSpec& s, const std::string& v) { ref(s) = v; }};
}

template <typename E>
ConfigKey enumKey(std::string name, std::string help, Ref<E> ref, E (*parse)(const std::string&)) {
  return {name, std::move(help),
          [ref](const ExperimentSpec& s) { return std::string(toString(ref(const_cast<ExperimentSpec&>(s)))); },
          [ref, parse, name](ExperimentSpec& s, const std::string& v) {
            try {
              ref(s) = parse(v);
            } catch (const Error& e) {
              throw Error("config key '" + name + "': " + e.what());
            }
          }};
}

ConfigKey calibKey(std::string name, SemanticClass c) {
  const uint8_t id = static_cast<uint8_t>(c);
  return {name, std::string("occupied confidence of class ") + toString(c),
          [id](const ExperimentSpec& s) {
            const auto& m = s.mission.calibration.occupied;
            auto it = m.find(id);
            return it == m.end() ? std::string("none") : formatDouble(it->second);
          },
          [id, name](ExperimentSpec& s, const std::string& v) {
            if (v == "none") {
              s.mission.calibration.occupied.erase(id);
              return;
            }
            double d;
            if (!parseDouble(v, d) || !(d >= 0.0 && d < 1.0)) badValue(name, v, "a value in [0, 1) or none");
            s.mission.calibration.occupied[id] = d;
          }};
}

std::string joinDoubles(const std::vector<double>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + formatDouble(v[i]);
  return out;
}

std::vector<ConfigKey> buildKeys() {
  std::vector<ConfigKey> k;
  // world
  k.push_back(stringKey("world", "world file; empty generates one procedurally",
                        [](ExperimentSpec& s) -> std::string& { return s.world_file; }));
  k.push_back(intKey<uint64_t>("world.seed", "seed of the procedural world",
                               [](ExperimentSpec& s) -> uint64_t& { return s.world_seed; }));
  k.push_back(realKey("world.size_x", "world extent along x [m]", [](ExperimentSpec& s) -> double& { return s.world.size_x; }));
  k.push_back(realKey("world.size_y", "world extent along y [m]", [](ExperimentSpec& s) -> double& { return s.world.size_y; }));
  k.push_back(realKey("world.size_z", "world height [m]", [](ExperimentSpec& s) -> double& { return s.world.size_z; }));
  k.push_back(realKey("world.voxel_size", "voxel edge [m]", [](ExperimentSpec& s) -> double& { return s.world.voxel_size; }));
  k.push_back(intKey<int>("world.rooms", "number of rooms", [](ExperimentSpec& s) -> int& { return s.world.rooms; }));
  k.push_back(realKey("world.min_room_side", "minimum room side [m]", [](ExperimentSpec& s) -> double& { return s.world.min_room_side; }));
  k.push_back(realKey("world.wall_thickness", "wall thickness [m]", [](ExperimentSpec& s) -> double& { return s.world.wall_thickness; }));
  k.push_back(realKey("world.door_width", "doorway width [m]", [](ExperimentSpec& s) -> double& { return s.world.door_width; }));
  k.push_back(realKey("world.door_height", "doorway height [m]", [](ExperimentSpec& s) -> double& { return s.world.door_height; }));
  k.push_back(intKey<int>("world.clutter", "clutter objects per room", [](ExperimentSpec& s) -> int& { return s.world.clutter_per_room; }));
  k.push_back(boolKey("world.extruded", "2.5D layout extruded floor to ceiling", [](ExperimentSpec& s) -> bool& { return s.world.extruded; }));
  k.push_back(realKey("world.start_height", "start height [m]", [](ExperimentSpec& s) -> double& { return s.world.start_height; }));
  k.push_back(realKey("world.start_clearance", "clutter-free radius around the start [m]", [](ExperimentSpec& s) -> double& { return s.world.start_clearance; }));
  // mission
  k.push_back(realKey("t_max", "mission time limit [s]", [](ExperimentSpec& s) -> double& { return s.mission.t_max; }));
  k.push_back(realKey("control_dt", "control step [s]", [](ExperimentSpec& s) -> double& { return s.mission.control_dt; }));
  k.push_back(realKey("sensor_rate", "depth frames per second", [](ExperimentSpec& s) -> double& { return s.mission.sensor_rate; }));
  k.push_back(realKey("prediction_rate", "scene completions per second; 0 disables", [](ExperimentSpec& s) -> double& { return s.mission.prediction_rate; }));
  k.push_back(realKey("metrics_period", "metrics cadence [s]", [](ExperimentSpec& s) -> double& { return s.mission.metrics_period; }));
  k.push_back(intKey<int>("expansions", "tree expansions per control step", [](ExperimentSpec& s) -> int& { return s.mission.expansions_per_step; }));
  k.push_back(realKey("replan_period", "retry period while no view has utility [s]", [](ExperimentSpec& s) -> double& { return s.mission.replan_period; }));
  k.push_back(intKey<int>("stuck_limit", "failed selections before the mission stops", [](ExperimentSpec& s) -> int& { return s.mission.stuck_limit; }));
  k.push_back(realKey("start_clear_radius", "radius assumed free at take-off [m]", [](ExperimentSpec& s) -> double& { return s.mission.start_clear_radius; }));
  k.push_back(intKey<uint64_t>("seed", "mission seed", [](ExperimentSpec& s) -> uint64_t& { return s.mission.seed; }));
  // sensor
  k.push_back(realKey("sensor.hfov", "horizontal field of view [deg]", [](ExperimentSpec& s) -> double& { return s.mission.sensor.horizontal_fov_deg; }));
  k.push_back(realKey("sensor.vfov", "vertical field of view [deg]", [](ExperimentSpec& s) -> double& { return s.mission.sensor.vertical_fov_deg; }));
  k.push_back(realKey("sensor.range", "sensing range [m]", [](ExperimentSpec& s) -> double& { return s.mission.sensor.max_range; }));
  k.push_back(intKey<int>("sensor.width", "depth image columns", [](ExperimentSpec& s) -> int& { return s.mission.sensor.width; }));
  k.push_back(intKey<int>("sensor.height", "depth image rows", [](ExperimentSpec& s) -> int& { return s.mission.sensor.height; }));
  // planner
  k.push_back(enumKey<GainKind>("gain", "exploration|sc|hybrid|occupied|confidence",
                                [](ExperimentSpec& s) -> GainKind& { return s.mission.planner.gain; }, gainKindFromString));
  k.push_back(enumKey<RaycastMode>("raycast", "blocking|nonblocking",
                                   [](ExperimentSpec& s) -> RaycastMode& { return s.mission.planner.raycast; }, raycastModeFromString));
  k.push_back(enumKey<CollisionMode>("collision", "conservative|optimistic",
                                     [](ExperimentSpec& s) -> CollisionMode& { return s.mission.planner.collision; }, collisionModeFromString));
  k.push_back(realKey("sampling_radius", "sampling radius around tree nodes [m]", [](ExperimentSpec& s) -> double& { return s.mission.planner.sampling_radius; }));
  k.push_back(realKey("max_edge_length", "longest tree edge [m]", [](ExperimentSpec& s) -> double& { return s.mission.planner.max_edge_length; }));
  k.push_back(intKey<int>("rays.columns", "gain rays per field of view horizontally", [](ExperimentSpec& s) -> int& { return s.mission.planner.rays.columns_per_fov; }));
  k.push_back(intKey<int>("rays.rows", "gain rays vertically", [](ExperimentSpec& s) -> int& { return s.mission.planner.rays.rows; }));
  k.push_back(intKey<int>("yaw_samples", "sampled yaws per node", [](ExperimentSpec& s) -> int& { return s.mission.planner.rays.yaw_samples; }));
  k.push_back(realKey("v_max", "maximum speed [m/s]", [](ExperimentSpec& s) -> double& { return s.mission.planner.motion.v_max; }));
  k.push_back(realKey("yaw_rate", "maximum yaw rate [rad/s]", [](ExperimentSpec& s) -> double& { return s.mission.planner.motion.yaw_rate_max; }));
  k.push_back(realKey("a_max", "maximum acceleration [m/s^2]", [](ExperimentSpec& s) -> double& { return s.mission.planner.motion.a_max; }));
  k.push_back(realKey("collision_radius", "robot collision radius [m]", [](ExperimentSpec& s) -> double& { return s.mission.planner.collision_radius; }));
  k.push_back(intKey<int>("max_tree_size", "tree node cap", [](ExperimentSpec& s) -> int& { return s.mission.planner.max_tree_size; }));
  // mapping
  k.push_back(enumKey<FusionStrategy>("fusion", "occupancy|probabilistic|counting|scfusion|nofusion",
                                      [](ExperimentSpec& s) -> FusionStrategy& { return s.mission.fusion; }, fusionStrategyFromString));
  k.push_back(realKey("tau", "confidence threshold in [0, 1]", [](ExperimentSpec& s) -> double& { return s.mission.tau; }));
  k.push_back(enumKey<MapView>("map", "hierarchical|measured|sc",
                               [](ExperimentSpec& s) -> MapView& { return s.mission.map_view; }, mapViewFromString));
  k.push_back(enumKey<EvaluationSet>("evaluation", "all|observed|predicted",
                                     [](ExperimentSpec& s) -> EvaluationSet& { return s.mission.evaluation; }, evaluationSetFromString));
  k.push_back(realKey("log_odds_hit", "measured layer hit update", [](ExperimentSpec& s) -> double& { return s.mission.measured.log_odds_hit; }));
  k.push_back(realKey("log_odds_miss", "measured layer miss update", [](ExperimentSpec& s) -> double& { return s.mission.measured.log_odds_miss; }));
  k.push_back(realKey("log_odds_min", "measured layer clamp low", [](ExperimentSpec& s) -> double& { return s.mission.measured.min_log_odds; }));
  k.push_back(realKey("log_odds_max", "measured layer clamp high", [](ExperimentSpec& s) -> double& { return s.mission.measured.max_log_odds; }));
  k.push_back(calibKey("calib.floor", SemanticClass::kFloor));
  k.push_back(calibKey("calib.wall", SemanticClass::kWall));
  k.push_back(calibKey("calib.furniture", SemanticClass::kFurniture));
  k.push_back(calibKey("calib.sofa", SemanticClass::kSofa));
  k.push_back(realKey("calib.free", "probability used for free predictions", [](ExperimentSpec& s) -> double& { return s.mission.calibration.free_probability; }));
  // oracle
  k.push_back(enumKey<OracleKind>("oracle", "perfect|noisy",
                                  [](ExperimentSpec& s) -> OracleKind& { return s.mission.oracle.kind; }, oracleKindFromString));
  k.push_back(realKey("noise.miss", "occupied emitted as free", [](ExperimentSpec& s) -> double& { return s.mission.oracle.noise.miss_rate; }));
  k.push_back(realKey("noise.hallucination", "free emitted as occupied", [](ExperimentSpec& s) -> double& { return s.mission.oracle.noise.hallucination_rate; }));
  k.push_back(realKey("noise.prior", "occupied fraction behind the reported confidence", [](ExperimentSpec& s) -> double& { return s.mission.oracle.noise.prior_occupied; }));
  k.push_back(boolKey("noise.correlated", "flip whole cells instead of voxels", [](ExperimentSpec& s) -> bool& { return s.mission.oracle.noise.correlated; }));
  k.push_back(intKey<int>("noise.cell", "correlated noise cell [voxels]", [](ExperimentSpec& s) -> int& { return s.mission.oracle.noise.correlation_cell; }));
  k.push_back({"prediction.dims", "prediction box size in voxels, nx,ny,nz",
               [](const ExperimentSpec& s) {
                 const auto& d = s.mission.prediction_dims;
                 return std::to_string(d[0]) + "," + std::to_string(d[1]) + "," + std::to_string(d[2]);
               },
               [](ExperimentSpec& s, const std::string& v) {
                 const auto parts = splitString(v, ',');
                 std::array<int, 3> d{};
                 if (parts.size() != 3) badValue("prediction.dims", v, "three integers");
                 for (int a = 0; a < 3; ++a) {
                   if (!parseInt(trim(parts[a]), d[a]) || d[a] <= 0) badValue("prediction.dims", v, "three positive integers");
                 }
                 s.mission.prediction_dims = d;
               }});
  // experiment
  k.push_back(intKey<int>("repetitions", "runs per batch cell", [](ExperimentSpec& s) -> int& { return s.repetitions; }));
  k.push_back(stringKey("output", "output directory", [](ExperimentSpec& s) -> std::string& { return s.output_dir; }));
  k.push_back({"goals", "coverage thresholds reported as times to goal, comma separated",
               [](const ExperimentSpec& s) { return joinDoubles(s.goals); },
               [](ExperimentSpec& s, const std::string& v) {
                 std::vector<double> g;
                 if (!trim(v).empty()) {
                   for (const std::string& part : splitString(v, ',')) {
                     double d;
                     if (!parseDouble(trim(part), d)) badValue("goals", v, "comma separated numbers");
                     g.push_back(d);
                   }
                 }
                 s.goals = std::move(g);
               }});
  k.push_back(boolKey("svg", "write line charts next to the CSV files", [](ExperimentSpec& s) -> bool& { return s.svg; }));
  k.push_back(intKey<int>("jobs", "parallel batch runs", [](ExperimentSpec& s) -> int& { return s.jobs; }));
  return k;
}

}  // namespace

const std::vector<ConfigKey>& configKeys() {
  static const std::vector<ConfigKey> keys = buildKeys();
  return keys;
}

const ConfigKey* findConfigKey(const std::string& name) {
  for (const ConfigKey& k : configKeys()) {
    if (k.name == name) return &k;
  }
  return nullptr;
}

void setConfigValue(ExperimentSpec& spec, const std::string& key, const std::string& value) {
  const ConfigKey* k = findConfigKey(key);
  if (!k) throw Error("unknown config key '" + key + "'");
  k->set(spec, value);
}

void applyConfig(ExperimentSpec& spec, std::istream& in, const std::string& source) {
  std::string line;
  size_t line_no = 0;
  bool versioned = false;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no) + ": ";
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const size_t eq = text.find('=');
    if (eq == std::string::npos) throw Error(where + "expected 'key = value'");
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key == "schema_version") {
      int v = 0;
      if (!parseInt(value, v) || v != kConfigSchemaVersion) {
        throw Error(where + "unsupported schema_version '" + value + "'");
      }
      versioned = true;
      continue;
    }
    if (!versioned) throw Error(where + "schema_version must come first");
    try {
      if (key.rfind("axis.", 0) == 0) {
        const std::string target = key.substr(5);
        if (!findConfigKey(target)) throw Error("unknown axis key '" + target + "'");
        std::vector<std::string> values;
        for (const std::string& part : splitString(value, ',')) values.push_back(trim(part));
        spec.axes[target] = values;
      } else {
        setConfigValue(spec, key, value);
      }
    } catch (const Error& e) {
      throw Error(where + e.what());
    }
  }
  if (!versioned) throw Error(source + ": missing schema_version");
}

void applyConfigFile(ExperimentSpec& spec, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file '" + path + "'");
  applyConfig(spec, in, path);
}

void writeConfig(const ExperimentSpec& spec, std::ostream& out) {
  out << "schema_version = " << kConfigSchemaVersion << '\n';
  for (const ConfigKey& k : configKeys()) out << k.name << " = " << k.get(spec) << '\n';
  for (const auto& [key, values] : spec.axes) {
    out << "axis." << key << " = ";
    for (size_t i = 0; i < values.size(); ++i) out << (i ? "," : "") << values[i];
    out << '\n';
  }
}

std::string configToString(const ExperimentSpec& spec) {
  std::ostringstream out;
  writeConfig(spec, out);
  return out.str();
}

void applyEnvironment(ExperimentSpec& spec) {
  if (const char* dir = std::getenv("VOXPLORE_OUTPUT_DIR"); dir && *dir) spec.output_dir = dir;
  if (const char* jobs = std::getenv("VOXPLORE_JOBS"); jobs && *jobs) {
    int j = 0;
    if (!parseInt(std::string_view(jobs), j) || j < 1) {
      throw Error(std::string("VOXPLORE_JOBS must be a positive integer, got '") + jobs + "'");
    }
    spec.jobs = j;
  }
}

}  // namespace voxplore
