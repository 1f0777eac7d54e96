#include "voxplore/multi_layer_map.h"

#include <algorithm>
#include <limits>

namespace voxplore {

const char* toString(LookupSource s) {
  switch (s) {
    case LookupSource::kMeasured: return "measured";
    case LookupSource::kPredicted: return "predicted";
    case LookupSource::kUnknown: return "unknown";
  }
  return "?";
}

const char* toString(CollisionMode m) {
  return m == CollisionMode::kConservative ? "conservative" : "optimistic";
}

CollisionMode collisionModeFromString(const std::string& s) {
  if (s == "conservative") return CollisionMode::kConservative;
  if (s == "optimistic") return CollisionMode::kOptimistic;
  throw Error("unknown collision mode '" + s + "'");
}

const char* toString(MapView v) {
  switch (v) {
    case MapView::kHierarchical: return "hierarchical";
    case MapView::kMeasuredOnly: return "measured";
    case MapView::kScOnly: return "sc";
  }
  return "?";
}

MapView mapViewFromString(const std::string& s) {
  if (s == "hierarchical") return MapView::kHierarchical;
  if (s == "measured") return MapView::kMeasuredOnly;
  if (s == "sc") return MapView::kScOnly;
  throw Error("unknown map view '" + s + "'");
}

ConfidenceCutoffs confidenceCutoffs(double tau) {
  if (!(tau >= 0.0 && tau <= 1.0)) throw Error("confidence threshold must lie in [0, 1]");
  if (tau == 1.0) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    return {inf, -inf};
  }
  const double l = std::log((1.0 + tau) / (1.0 - tau));
  return {l, -l};
}

MultiLayerMap::MultiLayerMap(GridConfig grid, MeasuredLayerConfig measured_config,
                             std::optional<Aabb> bounds, double tau)
    : measured_(grid, measured_config, bounds), sc_(grid) {
  setConfidenceThreshold(tau);
}

void MultiLayerMap::setConfidenceThreshold(double tau) {
  cutoffs_ = confidenceCutoffs(tau);
  tau_ = tau;
}

LookupResult MultiLayerMap::lookup(const VoxelIndex& v) const {
  return combine(measured_.grid().get(v), sc_.grid().get(v));
}

GainClass MultiLayerMap::classifyForGain(const VoxelIndex& v) const {
  return classify(measured_.grid().get(v), sc_.grid().get(v));
}

std::optional<double> MultiLayerMap::scProbability(const VoxelIndex& v) const {
  const auto l = sc_.logOddsAt(v);
  if (!l) return std::nullopt;
  return probability(*l);
}

bool MultiLayerMap::freeFor(Reader& reader, const VoxelIndex& v, CollisionMode mode) const {
  const auto& bounds = measured_.bounds();
  if (bounds) {
    const Point c = indexToCenter(v, gridConfig());
    if (!bounds->contains(c)) return false;
  }
  const LookupResult r = reader.lookup(v);
  if (r.state != Occupancy::kFree) return false;
  return mode == CollisionMode::kOptimistic || r.source == LookupSource::kMeasured;
}

bool MultiLayerMap::isTraversable(const Point& p, CollisionMode mode, double r_c) const {
  return isSegmentTraversable(p, p, mode, r_c);
}

bool MultiLayerMap::isSegmentTraversable(const Point& a, const Point& b, CollisionMode mode,
                                         double r_c) const {
  if (!(r_c > 0.0)) throw Error("collision radius must be positive");
  const double vs = gridConfig().voxel_size;
  const double reach = r_c + 0.5 * std::sqrt(3.0) * vs;
  const double reach2 = reach * reach;
  const Point lo = a.cwiseMin(b).array() - reach;
  const Point hi = a.cwiseMax(b).array() + reach;
  const VoxelIndex imin = worldToIndex(lo, vs);
  const VoxelIndex imax = worldToIndex(hi, vs);
  const Point ab = b - a;
  const double len2 = ab.squaredNorm();
  Reader reader(*this);
  for (int64_t z = imin.z; z <= imax.z; ++z) {
    for (int64_t y = imin.y; y <= imax.y; ++y) {
      for (int64_t x = imin.x; x <= imax.x; ++x) {
        const VoxelIndex v{x, y, z};
        const Point c = indexToCenter(v, vs);
        double t = len2 > 0.0 ? (c - a).dot(ab) / len2 : 0.0;
        t = std::clamp(t, 0.0, 1.0);
        if ((a + t * ab - c).squaredNorm() > reach2) continue;
        if (!freeFor(reader, v, mode)) return false;
      }
    }
  }
  return true;
}

}  // namespace voxplore
