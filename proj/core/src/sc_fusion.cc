#include "voxplore/sc_fusion.h"

#include <algorithm>

namespace voxplore {

const char* toString(SemanticClass c) {
  switch (c) {
    case SemanticClass::kNone: return "none";
    case SemanticClass::kFloor: return "floor";
    case SemanticClass::kWall: return "wall";
    case SemanticClass::kFurniture: return "furniture";
    case SemanticClass::kSofa: return "sofa";
  }
  return "?";
}

SemanticClass semanticClassFromString(const std::string& s) {
  if (s == "none") return SemanticClass::kNone;
  if (s == "floor") return SemanticClass::kFloor;
  if (s == "wall") return SemanticClass::kWall;
  if (s == "furniture") return SemanticClass::kFurniture;
  if (s == "sofa") return SemanticClass::kSofa;
  throw Error("unknown semantic class '" + s + "'");
}

ClassCalibration ClassCalibration::defaults() {
  ClassCalibration c;
  c.occupied[static_cast<uint8_t>(SemanticClass::kSofa)] = 0.56;
  c.occupied[static_cast<uint8_t>(SemanticClass::kFloor)] = 0.41;
  c.occupied[static_cast<uint8_t>(SemanticClass::kWall)] = 0.41;
  c.occupied[static_cast<uint8_t>(SemanticClass::kFurniture)] = 0.3;
  c.free_probability = 0.49;
  return c;
}

void ClassCalibration::validate() const {
  if (!(free_probability > 0.0 && free_probability < 0.5)) {
    throw Error("ClassCalibration: free probability must lie in (0, 0.5)");
  }
  for (const auto& [id, p] : occupied) {
    if (!(p >= 0.0 && p < 1.0)) {
      throw Error("ClassCalibration: confidence of class " + std::to_string(id) +
                  " must lie in [0, 1)");
    }
  }
}

double ClassCalibration::confidenceFor(uint8_t class_id) const {
  auto it = occupied.find(class_id);
  if (it == occupied.end()) {
    throw Error("ClassCalibration: no confidence for class id " + std::to_string(class_id));
  }
  return it->second;
}

double occupancyUpdateWeight(bool predicted_occupied, uint8_t class_id,
                             const ClassCalibration& calib) {
  if (!predicted_occupied) {
    const double pf = calib.free_probability;
    return std::log(pf / (1.0 - pf));
  }
  const double p = calib.confidenceFor(class_id);
  return std::log((1.0 + p) / (1.0 - p));
}

const char* toString(FusionStrategy s) {
  switch (s) {
    case FusionStrategy::kOccupancy: return "occupancy";
    case FusionStrategy::kProbabilistic: return "probabilistic";
    case FusionStrategy::kCounting: return "counting";
    case FusionStrategy::kScFusionBaseline: return "scfusion";
    case FusionStrategy::kNoFusion: return "nofusion";
  }
  return "?";
}

FusionStrategy fusionStrategyFromString(const std::string& s) {
  if (s == "occupancy") return FusionStrategy::kOccupancy;
  if (s == "probabilistic") return FusionStrategy::kProbabilistic;
  if (s == "counting") return FusionStrategy::kCounting;
  if (s == "scfusion") return FusionStrategy::kScFusionBaseline;
  if (s == "nofusion") return FusionStrategy::kNoFusion;
  throw Error("unknown fusion strategy '" + s + "'");
}

ScLayer::ScLayer(GridConfig grid) : grid_(grid, ScVoxel{}), counts_(grid, HitCount{}) {}

namespace {

double networkLogOdds(const PredictedVoxel& v) {
  const double p = std::clamp(Prediction::occupancyProbability(v), kMinPredictionProbability,
                              1.0 - kMinPredictionProbability);
  return logOdds(p);
}

}  // namespace

void ScLayer::fuse(const Prediction& prediction, FusionStrategy strategy,
                   const ClassCalibration& calib, const MeasuredLayer* measured) {
  const double vs = gridConfig().voxel_size;
  if (std::abs(prediction.voxel_size - vs) > 1e-9 * vs) {
    throw Error("ScLayer::fuse: prediction voxel size " + std::to_string(prediction.voxel_size) +
                " does not match layer voxel size " + std::to_string(vs));
  }
  if (prediction.voxels.size() != prediction.volume()) {
    throw Error("ScLayer::fuse: prediction payload does not match its dimensions");
  }
  if (strategy == FusionStrategy::kScFusionBaseline && measured == nullptr) {
    throw Error("ScLayer::fuse: the SCFusion baseline needs the measured layer");
  }

  // Resolve calibration lookups up front so a bad class id fails before any
  // voxel is touched.
  std::array<double, 256> occupied_weight{};
  std::array<bool, 256> known{};
  if (strategy == FusionStrategy::kOccupancy || strategy == FusionStrategy::kScFusionBaseline) {
    for (const PredictedVoxel& pv : prediction.voxels) {
      if (!pv.occupied || known[pv.class_id]) continue;
      occupied_weight[pv.class_id] = occupancyUpdateWeight(true, pv.class_id, calib);
      known[pv.class_id] = true;
    }
  }
  const double free_weight = occupancyUpdateWeight(false, 0, calib);

  BlockHashGrid<ScVoxel>::Writer writer(grid_);
  BlockHashGrid<HitCount>::Writer count_writer(counts_);
  std::optional<BlockHashGrid<MeasuredVoxel>::Reader> measured_reader;
  if (measured) measured_reader.emplace(measured->grid());

  const auto& d = prediction.dims;
  size_t offset = 0;
  for (int k = 0; k < d[2]; ++k) {
    for (int j = 0; j < d[1]; ++j) {
      for (int i = 0; i < d[0]; ++i, ++offset) {
        const PredictedVoxel& pv = prediction.voxels[offset];
        const VoxelIndex idx = prediction.globalIndex(i, j, k);
        switch (strategy) {
          case FusionStrategy::kOccupancy: {
            ScVoxel& voxel = writer.at(idx);
            const double prior = voxel.predicted() ? voxel.log_odds : 0.0;
            const double w = pv.occupied ? occupied_weight[pv.class_id] : free_weight;
            voxel.log_odds = static_cast<float>(prior + w);
            break;
          }
          case FusionStrategy::kProbabilistic: {
            ScVoxel& voxel = writer.at(idx);
            const double prior = voxel.predicted() ? voxel.log_odds : 0.0;
            voxel.log_odds = static_cast<float>(prior + networkLogOdds(pv));
            break;
          }
          case FusionStrategy::kCounting: {
            HitCount& count = count_writer.at(idx);
            count.total += 1;
            if (pv.occupied) count.hits += 1;
            writer.at(idx).log_odds =
                static_cast<float>(logOdds(countingProbability(count.hits, count.total)));
            break;
          }
          case FusionStrategy::kScFusionBaseline: {
            if (!pv.occupied) break;
            if (MeasuredLayer::stateOf(measured_reader->get(idx)) != Occupancy::kUnknown) break;
            ScVoxel& voxel = writer.at(idx);
            const double prior = voxel.predicted() ? voxel.log_odds : 0.0;
            voxel.log_odds = static_cast<float>(prior + occupied_weight[pv.class_id]);
            break;
          }
          case FusionStrategy::kNoFusion: {
            writer.at(idx).log_odds = static_cast<float>(networkLogOdds(pv));
            break;
          }
        }
      }
    }
  }
  ++fused_;
}

}  // namespace voxplore
