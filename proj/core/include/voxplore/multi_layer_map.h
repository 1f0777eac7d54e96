#pragma once

#include <cmath>
#include <optional>

#include "voxplore/measured_map.h"
#include "voxplore/sc_fusion.h"

namespace voxplore {

enum class LookupSource : uint8_t { kMeasured, kPredicted, kUnknown };

struct LookupResult {
  Occupancy state = Occupancy::kUnknown;
  LookupSource source = LookupSource::kUnknown;

  friend bool operator==(const LookupResult&, const LookupResult&) = default;
};

/// Membership in the measured set S, the predicted-only set P, or neither.
enum class GainClass : uint8_t { kInS, kInP, kNeither };

enum class CollisionMode : uint8_t { kConservative, kOptimistic };

/// Which layers a lookup consults. kHierarchical is the normal two-layer map;
/// the others emulate single-layer maps for ablations.
enum class MapView : uint8_t { kHierarchical, kMeasuredOnly, kScOnly };

const char* toString(LookupSource s);
const char* toString(CollisionMode m);
CollisionMode collisionModeFromString(const std::string& s);
const char* toString(MapView v);
MapView mapViewFromString(const std::string& s);

/// Log-odds cut-offs for a confidence threshold tau in [0, 1]:
/// occupied = log((1 + tau) / (1 - tau)), free = -occupied. tau = 1 gives
/// (+inf, -inf).
struct ConfidenceCutoffs {
  double occupied = 0.0;
  double free = 0.0;
};

ConfidenceCutoffs confidenceCutoffs(double tau);

/// SC state of a single voxel under the given cut-offs. Voxels strictly
/// between the cut-offs and never-predicted voxels are unknown.
inline Occupancy scStateOf(const ScVoxel& voxel, const ConfidenceCutoffs& c) {
  if (!voxel.predicted()) return Occupancy::kUnknown;
  const double l = voxel.log_odds;
  if (l >= c.occupied) return Occupancy::kOccupied;
  if (l <= c.free) return Occupancy::kFree;
  return Occupancy::kUnknown;
}

/// Measured layer plus SC layer sharing one grid. Measured states always take
/// precedence; the SC layer only answers for voxels the sensor never saw.
class MultiLayerMap {
 public:
  explicit MultiLayerMap(GridConfig grid = {}, MeasuredLayerConfig measured_config = {},
                         std::optional<Aabb> bounds = std::nullopt, double tau = 0.0);

  void setConfidenceThreshold(double tau);
  double confidenceThreshold() const { return tau_; }
  const ConfidenceCutoffs& cutoffs() const { return cutoffs_; }

  void setView(MapView view) { view_ = view; }
  MapView view() const { return view_; }

  MeasuredLayer& measured() { return measured_; }
  const MeasuredLayer& measured() const { return measured_; }
  ScLayer& sc() { return sc_; }
  const ScLayer& sc() const { return sc_; }
  const GridConfig& gridConfig() const { return measured_.gridConfig(); }

  LookupResult lookup(const VoxelIndex& v) const;
  Occupancy scState(const VoxelIndex& v) const { return scStateOf(sc_.grid().get(v), cutoffs_); }
  GainClass classifyForGain(const VoxelIndex& v) const;
  /// SC occupancy probability, nullopt when never predicted.
  std::optional<double> scProbability(const VoxelIndex& v) const;

  /// True iff every voxel whose center lies within r_c + (sqrt(3)/2) * voxel
  /// of p is free: measured-free in conservative mode, free from either
  /// source in optimistic mode. Voxels outside the bounds are never free.
  bool isTraversable(const Point& p, CollisionMode mode, double r_c) const;
  /// Same test for the capsule swept by the sphere along [a, b].
  bool isSegmentTraversable(const Point& a, const Point& b, CollisionMode mode, double r_c) const;

  /// Cached accessor for hot loops. Must not outlive the map; not safe
  /// against concurrent writers.
  class Reader {
   public:
    explicit Reader(const MultiLayerMap& map)
        : map_(&map), measured_(map.measured_.grid()), sc_(map.sc_.grid()) {}

    LookupResult lookup(const VoxelIndex& v) {
      return map_->combine(measured_.get(v), sc_.get(v));
    }
    GainClass classifyForGain(const VoxelIndex& v) {
      return map_->classify(measured_.get(v), sc_.get(v));
    }
    const MeasuredVoxel& measuredVoxel(const VoxelIndex& v) { return measured_.get(v); }
    const ScVoxel& scVoxel(const VoxelIndex& v) { return sc_.get(v); }
    const MultiLayerMap& map() const { return *map_; }

   private:
    const MultiLayerMap* map_;
    BlockHashGrid<MeasuredVoxel>::Reader measured_;
    BlockHashGrid<ScVoxel>::Reader sc_;
  };

  LookupResult combine(const MeasuredVoxel& m, const ScVoxel& s) const {
    if (view_ != MapView::kScOnly) {
      const Occupancy ms = MeasuredLayer::stateOf(m);
      if (ms != Occupancy::kUnknown) return {ms, LookupSource::kMeasured};
      if (view_ == MapView::kMeasuredOnly) return {};
    }
    const Occupancy ss = scStateOf(s, cutoffs_);
    if (ss != Occupancy::kUnknown) return {ss, LookupSource::kPredicted};
    return {};
  }

  GainClass classify(const MeasuredVoxel& m, const ScVoxel& s) const {
    if (view_ != MapView::kScOnly && m.observed) return GainClass::kInS;
    if (view_ == MapView::kMeasuredOnly) return GainClass::kNeither;
    return scStateOf(s, cutoffs_) != Occupancy::kUnknown ? GainClass::kInP : GainClass::kNeither;
  }

 private:
  bool freeFor(Reader& reader, const VoxelIndex& v, CollisionMode mode) const;

  MeasuredLayer measured_;
  ScLayer sc_;
  double tau_ = 0.0;
  ConfidenceCutoffs cutoffs_;
  MapView view_ = MapView::kHierarchical;
};

}  // namespace voxplore
