#pragma once

#include <map>

#include "voxplore/sc_fusion.h"
#include "voxplore/world.h"

namespace voxplore {

/// Error model of the oracle. Miss: ground-truth occupied emitted as free.
/// Hallucination: ground-truth free emitted as occupied.
struct NoiseModel {
  double miss_rate = 0.0;
  double hallucination_rate = 0.0;
  std::map<uint8_t, double> class_miss_rate;  // overrides miss_rate per GT class
  /// Prior occupied fraction used to turn the rates into the reported
  /// per-state confidence (posterior that the emitted state is right).
  double prior_occupied = 0.5;
  uint64_t seed = 0;
  /// Draw flips per cube of `correlation_cell` voxels instead of per voxel.
  bool correlated = false;
  int correlation_cell = 4;

  void validate() const;
  double missRateFor(uint8_t gt_class) const;
  /// Confidence attached to emitted occupied / free voxels.
  float occupiedConfidence() const;
  float freeConfidence() const;

  /// Rates that give the requested expected precision and recall on a volume
  /// with the given occupied fraction.
  static NoiseModel tuned(double precision, double recall, double occupied_fraction, uint64_t seed = 0);
};

enum class OracleKind : uint8_t { kPerfect, kNoisy };

struct OracleMode {
  OracleKind kind = OracleKind::kPerfect;
  NoiseModel noise;

  static OracleMode perfect() { return {}; }
  static OracleMode noisy(NoiseModel n) { return {OracleKind::kNoisy, std::move(n)}; }
};

const char* toString(OracleKind k);
OracleKind oracleKindFromString(const std::string& s);

/// Global index of the minimum voxel of the box anchored at `pose`: yaw is
/// snapped to the nearest multiple of 90 degrees, the camera voxel sits at
/// the centre of the box's near face and the box bottom is the world floor.
VoxelIndex predictionOrigin(const Pose& pose, const GroundTruthWorld& world,
                            const std::array<int, 3>& dims = Prediction::kDefaultDims);

/// Completes the whole box from ground truth (occluded parts included) and
/// corrupts it with the noise model. Voxels outside the world read as free.
/// Throws Error when the pose is outside the world.
Prediction predict(const Pose& pose, const GroundTruthWorld& world, const OracleMode& mode,
                   const std::array<int, 3>& dims = Prediction::kDefaultDims);

}  // namespace voxplore
