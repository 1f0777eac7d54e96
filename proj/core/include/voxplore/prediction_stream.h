#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "voxplore/sc_fusion.h"
#include "voxplore/sensor_model.h"

namespace voxplore {

/// Recorded input stream of a mission: sensor frame poses and scene
/// completion predictions, in the order they were consumed. Depth frames are
/// stored by pose only; replay re-renders them from the world, which is
/// deterministic.
///
/// Text framing (one record per line, fields separated by single spaces):
///
///   voxplore-stream 1
///   voxel_size <v>
///   sensor <hfov_deg> <vfov_deg> <range> <width> <height>
///   clear <seq> <t> <x> <y> <z> <yaw> <radius>
///   frame <seq> <t> <x> <y> <z> <yaw>
///   pred <seq> <t> <x> <y> <z> <yaw> <oi> <oj> <ok> <nx> <ny> <nz> <runs> {<len> <o|f> <class> <conf>}...
///   end <record_count>
///
/// `clear` marks the take-off sphere as measured free. `seq` counts records
/// from zero. Prediction voxels are run-length encoded
/// in x-fastest order; a run covers consecutive voxels with identical state,
/// class and confidence. Reals use the shortest round-trip representation, so
/// write followed by read is lossless.
struct StreamRecord {
  enum class Kind { kClear, kFrame, kPrediction };

  Kind kind = Kind::kFrame;
  double time = 0.0;
  Pose pose;
  double radius = 0.0;    // only meaningful for kClear
  Prediction prediction;  // only meaningful for kPrediction

  friend bool operator==(const StreamRecord&, const StreamRecord&) = default;
};

struct PredictionStream {
  double voxel_size = 0.08;
  SensorModel sensor;
  std::vector<StreamRecord> records;

  size_t predictionCount() const;

  void write(std::ostream& out) const;
  std::string toString() const;
  void save(const std::string& path) const;

  /// Throws Error naming the offending record index on malformed input.
  static PredictionStream read(std::istream& in);
  static PredictionStream load(const std::string& path);
};

}  // namespace voxplore
