#pragma once

#include <string>

#include "voxplore/multi_layer_map.h"

namespace voxplore {

enum class GainKind : uint8_t { kExploration, kSc, kHybrid, kOccupied, kConfidence };

const char* toString(GainKind k);
GainKind gainKindFromString(const std::string& s);

/// Information of one voxel given its two layer payloads:
///   exploration  1 if not in S
///   sc           1 if in P
///   hybrid       2 in P, 0 in S, 1 otherwise
///   occupied     1 if in P and predicted occupied
///   confidence   |0.5 - p| if in P
inline double voxelInformation(const MultiLayerMap& map, const MeasuredVoxel& m, const ScVoxel& s,
                               GainKind kind) {
  const GainClass c = map.classify(m, s);
  switch (kind) {
    case GainKind::kExploration: return c == GainClass::kInS ? 0.0 : 1.0;
    case GainKind::kSc: return c == GainClass::kInP ? 1.0 : 0.0;
    case GainKind::kHybrid: return c == GainClass::kInP ? 2.0 : (c == GainClass::kInS ? 0.0 : 1.0);
    case GainKind::kOccupied:
      return c == GainClass::kInP && scStateOf(s, map.cutoffs()) == Occupancy::kOccupied ? 1.0 : 0.0;
    case GainKind::kConfidence:
      return c == GainClass::kInP ? std::abs(0.5 - probability(s.log_odds)) : 0.0;
  }
  return 0.0;
}

inline double voxelInformation(const VoxelIndex& v, GainKind kind, const MultiLayerMap& map) {
  return voxelInformation(map, map.measured().grid().get(v), map.sc().grid().get(v), kind);
}

}  // namespace voxplore
