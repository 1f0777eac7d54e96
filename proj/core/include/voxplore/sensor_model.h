#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "voxplore/grid.h"

namespace voxplore {

/// Pinhole depth camera looking along the body x axis (z up).
struct SensorModel {
  double horizontal_fov_deg = 90.0;
  double vertical_fov_deg = 73.7;
  double max_range = 5.0;
  int width = 90;
  int height = 68;

  void validate() const;

  /// Unit ray direction of pixel (u, v) in the world frame for the given yaw.
  /// Row 0 is the top of the image.
  Point pixelDirection(int u, int v, double yaw) const;
};

/// Per-pixel range along the pixel ray; +inf marks "no return within range".
struct DepthImage {
  int width = 0;
  int height = 0;
  std::vector<double> ranges;

  static constexpr double kNoHit = std::numeric_limits<double>::infinity();

  DepthImage() = default;
  DepthImage(int w, int h) : width(w), height(h), ranges(static_cast<size_t>(w) * h, kNoHit) {}

  double& at(int u, int v) { return ranges[static_cast<size_t>(v) * width + u]; }
  double at(int u, int v) const { return ranges[static_cast<size_t>(v) * width + u]; }
  size_t size() const { return ranges.size(); }

  friend bool operator==(const DepthImage&, const DepthImage&) = default;
};

}  // namespace voxplore
