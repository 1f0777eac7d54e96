#include "voxplore/sensor_model.h"

#include <cmath>
#include <numbers>
#include <string>

namespace voxplore {

void SensorModel::validate() const {
  if (!(horizontal_fov_deg > 0.0 && horizontal_fov_deg < 180.0) ||
      !(vertical_fov_deg > 0.0 && vertical_fov_deg < 180.0)) {
    throw Error("SensorModel: field of view must be in (0, 180) degrees");
  }
  if (!(max_range > 0.0)) throw Error("SensorModel: max_range must be positive");
  if (width < 0 || height < 0) throw Error("SensorModel: negative image size");
}

Point SensorModel::pixelDirection(int u, int v, double yaw) const {
  constexpr double kDeg = std::numbers::pi / 180.0;
  const double tan_h = std::tan(0.5 * horizontal_fov_deg * kDeg);
  const double tan_v = std::tan(0.5 * vertical_fov_deg * kDeg);
  const double left = -tan_h * (2.0 * (u + 0.5) / width - 1.0);
  const double up = -tan_v * (2.0 * (v + 0.5) / height - 1.0);
  const double c = std::cos(yaw);
  const double s = std::sin(yaw);
  Point d(c - s * left, s + c * left, up);
  return d.normalized();
}

}  // namespace voxplore
