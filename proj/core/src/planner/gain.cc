#include "voxplore/planner/gain.h"

namespace voxplore {

const char* toString(GainKind k) {
  switch (k) {
    case GainKind::kExploration: return "exploration";
    case GainKind::kSc: return "sc";
    case GainKind::kHybrid: return "hybrid";
    case GainKind::kOccupied: return "occupied";
    case GainKind::kConfidence: return "confidence";
  }
  return "?";
}

GainKind gainKindFromString(const std::string& s) {
  if (s == "exploration") return GainKind::kExploration;
  if (s == "sc") return GainKind::kSc;
  if (s == "hybrid") return GainKind::kHybrid;
  if (s == "occupied") return GainKind::kOccupied;
  if (s == "confidence") return GainKind::kConfidence;
  throw Error("unknown gain kind '" + s + "'");
}

}  // namespace voxplore
