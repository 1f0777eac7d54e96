#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace voxplore {

using Point = Eigen::Vector3d;

/// Base class of all errors raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Integer voxel coordinates. 64-bit so procedural worlds never overflow.
struct VoxelIndex {
  int64_t x = 0;
  int64_t y = 0;
  int64_t z = 0;

  friend bool operator==(const VoxelIndex&, const VoxelIndex&) = default;
  friend auto operator<=>(const VoxelIndex&, const VoxelIndex&) = default;

  VoxelIndex operator+(const VoxelIndex& o) const { return {x + o.x, y + o.y, z + o.z}; }
  VoxelIndex operator-(const VoxelIndex& o) const { return {x - o.x, y - o.y, z - o.z}; }
  int64_t& operator[](int axis) { return axis == 0 ? x : (axis == 1 ? y : z); }
  int64_t operator[](int axis) const { return axis == 0 ? x : (axis == 1 ? y : z); }
};

struct VoxelIndexHash {
  size_t operator()(const VoxelIndex& v) const noexcept {
    // Large primes as in the usual spatial hash; good enough for block keys.
    uint64_t h = static_cast<uint64_t>(v.x) * 73856093ULL;
    h ^= static_cast<uint64_t>(v.y) * 19349669ULL;
    h ^= static_cast<uint64_t>(v.z) * 83492791ULL;
    h ^= h >> 29;
    return static_cast<size_t>(h * 0xbf58476d1ce4e5b9ULL);
  }
};

struct GridConfig {
  double voxel_size = 0.08;
  int block_side = 16;

  /// Throws Error unless voxel_size > 0 and block_side is a power of two.
  void validate() const;
  double inverseVoxelSize() const { return 1.0 / voxel_size; }

  friend bool operator==(const GridConfig&, const GridConfig&) = default;
};

/// Position plus yaw. Yaw is kept in [-pi, pi).
struct Pose {
  Point position = Point::Zero();
  double yaw = 0.0;

  Pose() = default;
  Pose(double x, double y, double z, double yaw_rad);
  Pose(const Point& p, double yaw_rad);

  double x() const { return position.x(); }
  double y() const { return position.y(); }
  double z() const { return position.z(); }

  friend bool operator==(const Pose& a, const Pose& b) {
    return a.position == b.position && a.yaw == b.yaw;
  }
};

/// Wraps an angle into [-pi, pi).
double normalizeYaw(double yaw);

/// Shortest signed angular difference to - from, in [-pi, pi).
double yawDifference(double from, double to);

/// Axis-aligned box in world coordinates.
struct Aabb {
  Point min = Point::Zero();
  Point max = Point::Zero();

  bool contains(const Point& p) const {
    return (p.array() >= min.array()).all() && (p.array() <= max.array()).all();
  }
  Aabb shrunk(double margin) const {
    return {min.array() + margin, max.array() - margin};
  }
};

inline VoxelIndex worldToIndex(const Point& p, double voxel_size) {
  const double inv = 1.0 / voxel_size;
  return {static_cast<int64_t>(std::floor(p.x() * inv)),
          static_cast<int64_t>(std::floor(p.y() * inv)),
          static_cast<int64_t>(std::floor(p.z() * inv))};
}

inline VoxelIndex worldToIndex(const Point& p, const GridConfig& cfg) {
  return worldToIndex(p, cfg.voxel_size);
}

inline Point indexToCenter(const VoxelIndex& v, double voxel_size) {
  return {(static_cast<double>(v.x) + 0.5) * voxel_size,
          (static_cast<double>(v.y) + 0.5) * voxel_size,
          (static_cast<double>(v.z) + 0.5) * voxel_size};
}

inline Point indexToCenter(const VoxelIndex& v, const GridConfig& cfg) {
  return indexToCenter(v, cfg.voxel_size);
}

/// Minimum corner of the voxel box.
inline Point indexToCorner(const VoxelIndex& v, double voxel_size) {
  return {static_cast<double>(v.x) * voxel_size, static_cast<double>(v.y) * voxel_size,
          static_cast<double>(v.z) * voxel_size};
}

std::string toString(const VoxelIndex& v);

}  // namespace voxplore
