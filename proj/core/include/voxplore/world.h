#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "voxplore/block_hash_grid.h"
#include "voxplore/sc_fusion.h"

namespace voxplore {

/// Ground-truth voxel world covering indices [0, dims) on each axis, i.e. the
/// metric box [0, dims * voxel_size]. Each voxel holds a SemanticClass id;
/// kNone is free. Everything outside the box counts as occupied.
class GroundTruthWorld {
 public:
  GroundTruthWorld() = default;
  GroundTruthWorld(GridConfig grid, std::array<int64_t, 3> dims, Pose start);

  const GridConfig& gridConfig() const { return grid_.config(); }
  const std::array<int64_t, 3>& dims() const { return dims_; }
  Aabb bounds() const;
  const Pose& start() const { return start_; }
  void setStart(const Pose& start) { start_ = start; }

  bool contains(const VoxelIndex& v) const {
    return v.x >= 0 && v.y >= 0 && v.z >= 0 && v.x < dims_[0] && v.y < dims_[1] && v.z < dims_[2];
  }
  size_t linear(const VoxelIndex& v) const {
    return static_cast<size_t>(v.x) +
           static_cast<size_t>(dims_[0]) * (static_cast<size_t>(v.y) + static_cast<size_t>(dims_[1]) * static_cast<size_t>(v.z));
  }
  size_t volume() const { return labels_.size(); }

  uint8_t label(const VoxelIndex& v) const { return contains(v) ? labels_[linear(v)] : 0; }
  bool occupied(const VoxelIndex& v) const { return !contains(v) || labels_[linear(v)] != 0; }
  void setLabel(const VoxelIndex& v, uint8_t label);

  /// Sparse copy of the occupied voxels, labels as payload.
  const BlockHashGrid<uint8_t>& grid() const { return grid_; }
  /// Dense labels, x-fastest.
  const std::vector<uint8_t>& labels() const { return labels_; }

  /// Exact test of a sphere against the occupied voxel boxes (and the
  /// outside of the world).
  bool sphereCollides(const Point& center, double radius) const;

  friend bool operator==(const GroundTruthWorld& a, const GroundTruthWorld& b) {
    return a.gridConfig() == b.gridConfig() && a.dims_ == b.dims_ && a.start_ == b.start_ &&
           a.labels_ == b.labels_;
  }

 private:
  BlockHashGrid<uint8_t> grid_;
  std::array<int64_t, 3> dims_{0, 0, 0};
  Pose start_;
  std::vector<uint8_t> labels_;
};

/// Procedural indoor layout: rooms from recursive binary splits, one
/// doorway per split wall, and labelled clutter.
struct WorldSpec {
  double size_x = 20.0;
  double size_y = 15.0;
  double size_z = 3.0;
  double voxel_size = 0.08;
  int rooms = 4;
  double min_room_side = 2.5;
  double wall_thickness = 0.16;
  double door_width = 1.0;
  double door_height = 2.0;
  int clutter_per_room = 3;
  /// Constant-height layout extruded from floor to ceiling.
  bool extruded = false;
  double start_height = 1.0;
  /// Radius around the start kept free of clutter.
  double start_clearance = 1.0;

  void validate() const;
};

GroundTruthWorld generateWorld(const WorldSpec& spec, uint64_t seed);

/// Text format:
///
///   voxplore-world 1
///   voxel_size <v>
///   dims <nx> <ny> <nz>
///   start <x> <y> <z> <yaw>
///   runs <n>
///   <label> <length>        (n lines, x-fastest order)
///   end
void writeWorld(const GroundTruthWorld& world, std::ostream& out);
void saveWorld(const GroundTruthWorld& world, const std::string& path);
GroundTruthWorld readWorld(std::istream& in);
GroundTruthWorld loadWorld(const std::string& path);

}  // namespace voxplore
