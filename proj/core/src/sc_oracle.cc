#include "voxplore/sc_oracle.h"

#include <cmath>
#include <numbers>

#include "voxplore/random.h"

namespace voxplore {

namespace {

void checkRate(double r, const char* what) {
  if (!(r >= 0.0 && r <= 1.0)) throw Error(std::string("NoiseModel: ") + what + " must lie in [0, 1]");
}

}  // namespace

void NoiseModel::validate() const {
  checkRate(miss_rate, "miss rate");
  checkRate(hallucination_rate, "hallucination rate");
  for (const auto& [c, r] : class_miss_rate) checkRate(r, "class miss rate");
  if (!(prior_occupied > 0.0 && prior_occupied < 1.0)) {
    throw Error("NoiseModel: prior occupied fraction must lie in (0, 1)");
  }
  if (correlated && correlation_cell < 1) throw Error("NoiseModel: correlation cell must be >= 1");
}

double NoiseModel::missRateFor(uint8_t gt_class) const {
  auto it = class_miss_rate.find(gt_class);
  return it == class_miss_rate.end() ? miss_rate : it->second;
}

float NoiseModel::occupiedConfidence() const {
  const double f = prior_occupied;
  const double right = (1.0 - miss_rate) * f;
  const double wrong = hallucination_rate * (1.0 - f);
  if (right + wrong <= 0.0) return 0.5f;
  return static_cast<float>(right / (right + wrong));
}

float NoiseModel::freeConfidence() const {
  const double f = prior_occupied;
  const double right = (1.0 - hallucination_rate) * (1.0 - f);
  const double wrong = miss_rate * f;
  if (right + wrong <= 0.0) return 0.5f;
  return static_cast<float>(right / (right + wrong));
}

NoiseModel NoiseModel::tuned(double precision, double recall, double occupied_fraction, uint64_t seed) {
  if (!(precision > 0.0 && precision <= 1.0 && recall >= 0.0 && recall <= 1.0)) {
    throw Error("NoiseModel::tuned: precision must lie in (0, 1], recall in [0, 1]");
  }
  if (!(occupied_fraction > 0.0 && occupied_fraction < 1.0)) {
    throw Error("NoiseModel::tuned: occupied fraction must lie in (0, 1)");
  }
  NoiseModel n;
  n.miss_rate = 1.0 - recall;
  // precision = R f / (R f + h (1 - f))
  n.hallucination_rate =
      recall * occupied_fraction / (1.0 - occupied_fraction) * (1.0 - precision) / precision;
  n.prior_occupied = occupied_fraction;
  n.seed = seed;
  if (n.hallucination_rate > 1.0) {
    throw Error("NoiseModel::tuned: precision unreachable at this occupied fraction");
  }
  return n;
}

const char* toString(OracleKind k) { return k == OracleKind::kPerfect ? "perfect" : "noisy"; }

OracleKind oracleKindFromString(const std::string& s) {
  if (s == "perfect") return OracleKind::kPerfect;
  if (s == "noisy") return OracleKind::kNoisy;
  throw Error("unknown oracle mode '" + s + "'");
}

VoxelIndex predictionOrigin(const Pose& pose, const GroundTruthWorld& world,
                            const std::array<int, 3>& dims) {
  const VoxelIndex cam = worldToIndex(pose.position, world.gridConfig());
  const int q = static_cast<int>(std::lround(pose.yaw / (0.5 * std::numbers::pi))) & 3;
  VoxelIndex o;
  switch (q) {
    case 0:  // +x
      o.x = cam.x;
      o.y = cam.y - dims[1] / 2;
      break;
    case 1:  // +y
      o.x = cam.x - dims[0] / 2;
      o.y = cam.y;
      break;
    case 2:  // -x
      o.x = cam.x - (dims[0] - 1);
      o.y = cam.y - dims[1] / 2;
      break;
    default:  // -y
      o.x = cam.x - dims[0] / 2;
      o.y = cam.y - (dims[1] - 1);
      break;
  }
  o.z = 0;
  return o;
}

Prediction predict(const Pose& pose, const GroundTruthWorld& world, const OracleMode& mode,
                   const std::array<int, 3>& dims) {
  if (!world.bounds().contains(pose.position)) throw Error("predict: pose outside the world");
  for (int d : dims) {
    if (d <= 0) throw Error("predict: prediction dimensions must be positive");
  }
  Prediction p;
  p.anchor = pose;
  p.dims = dims;
  p.voxel_size = world.gridConfig().voxel_size;
  p.origin = predictionOrigin(pose, world, dims);
  p.voxels.resize(p.volume());

  const bool noisy = mode.kind == OracleKind::kNoisy;
  if (noisy) mode.noise.validate();
  const NoiseModel& n = mode.noise;
  const float conf_occ = noisy ? n.occupiedConfidence() : 1.0f;
  const float conf_free = noisy ? n.freeConfidence() : 1.0f;
  Rng rng(n.seed);
  const int64_t cell = std::max(1, n.correlation_cell);
  auto cellDraw = [&](const VoxelIndex& g) {
    const int64_t cx = g.x >= 0 ? g.x / cell : (g.x - cell + 1) / cell;
    const int64_t cy = g.y >= 0 ? g.y / cell : (g.y - cell + 1) / cell;
    const int64_t cz = g.z >= 0 ? g.z / cell : (g.z - cell + 1) / cell;
    uint64_t h = mixSeed(n.seed, static_cast<uint64_t>(cx));
    h = mixSeed(h, static_cast<uint64_t>(cy));
    h = mixSeed(h, static_cast<uint64_t>(cz));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
  };

  size_t offset = 0;
  for (int k = 0; k < dims[2]; ++k) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int i = 0; i < dims[0]; ++i, ++offset) {
        const VoxelIndex g = p.globalIndex(i, j, k);
        const uint8_t label = world.label(g);
        const bool gt_occupied = label != 0;
        PredictedVoxel& out = p.voxels[offset];
        out.class_id = label;
        bool emitted = gt_occupied;
        if (noisy) {
          const double u = n.correlated ? cellDraw(g) : rng.uniform();
          if (gt_occupied) {
            if (u < n.missRateFor(label)) emitted = false;
          } else if (u < n.hallucination_rate) {
            emitted = true;
            out.class_id = static_cast<uint8_t>(SemanticClass::kFurniture);
          }
        }
        out.occupied = emitted;
        out.confidence = emitted ? conf_occ : conf_free;
      }
    }
  }
  return p;
}

}  // namespace voxplore
