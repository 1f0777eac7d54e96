#include "voxplore/world.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <istream>
#include <ostream>

#include "voxplore/format.h"
#include "voxplore/random.h"

namespace voxplore {

GroundTruthWorld::GroundTruthWorld(GridConfig grid, std::array<int64_t, 3> dims, Pose start)
    : grid_(grid, 0), dims_(dims), start_(start) {
  for (int64_t d : dims) {
    if (d <= 0) throw Error("GroundTruthWorld: dimensions must be positive");
  }
  labels_.assign(static_cast<size_t>(dims[0]) * dims[1] * dims[2], 0);
}

Aabb GroundTruthWorld::bounds() const {
  const double vs = gridConfig().voxel_size;
  return {Point::Zero(), Point(dims_[0] * vs, dims_[1] * vs, dims_[2] * vs)};
}

void GroundTruthWorld::setLabel(const VoxelIndex& v, uint8_t label) {
  if (!contains(v)) throw Error("GroundTruthWorld: voxel " + toString(v) + " out of bounds");
  labels_[linear(v)] = label;
  if (label != 0) {
    grid_.at(v) = label;
  } else if (uint8_t* p = grid_.find(v)) {
    *p = 0;
  }
}

bool GroundTruthWorld::sphereCollides(const Point& center, double radius) const {
  const double vs = gridConfig().voxel_size;
  const VoxelIndex lo = worldToIndex(center.array() - radius, vs);
  const VoxelIndex hi = worldToIndex(center.array() + radius, vs);
  const double r2 = radius * radius;
  for (int64_t z = lo.z; z <= hi.z; ++z) {
    for (int64_t y = lo.y; y <= hi.y; ++y) {
      for (int64_t x = lo.x; x <= hi.x; ++x) {
        const VoxelIndex v{x, y, z};
        if (!occupied(v)) continue;
        const Point corner = indexToCorner(v, vs);
        double d2 = 0.0;
        for (int a = 0; a < 3; ++a) {
          const double c = center[a];
          const double bmin = corner[a], bmax = corner[a] + vs;
          if (c < bmin) d2 += (bmin - c) * (bmin - c);
          else if (c > bmax) d2 += (c - bmax) * (c - bmax);
        }
        if (d2 < r2) return true;
      }
    }
  }
  return false;
}

void WorldSpec::validate() const {
  if (!(voxel_size > 0.0)) throw Error("WorldSpec: voxel size must be positive");
  if (rooms < 1) throw Error("WorldSpec: need at least one room");
  if (!(wall_thickness > 0.0 && door_width > 0.0 && door_height > 0.0 && min_room_side > 0.0)) {
    throw Error("WorldSpec: wall, door and room sizes must be positive");
  }
  if (clutter_per_room < 0) throw Error("WorldSpec: negative clutter count");
  const double min_xy = 2.0 * wall_thickness + min_room_side;
  if (size_x < min_xy || size_y < min_xy) {
    throw Error("WorldSpec: footprint smaller than one room plus walls");
  }
  if (size_z < 2.0) throw Error("WorldSpec: height below 2 m");
  if (door_height > size_z - 2.0 * voxel_size) throw Error("WorldSpec: door taller than the room");
  if (start_height <= voxel_size || start_height >= size_z - voxel_size) {
    throw Error("WorldSpec: start height outside the room");
  }
}

namespace {

struct Rect {
  int64_t lo[2];
  int64_t hi[2];  // exclusive
  int64_t side(int a) const { return hi[a] - lo[a]; }
  int64_t area() const { return side(0) * side(1); }
};

struct Door {
  int along;       // axis the door interval runs along
  int64_t wall_lo;  // wall extent on the other axis
  int64_t wall_hi;
  int64_t d0, d1;   // door interval along `along`
};

class Builder {
 public:
  Builder(const WorldSpec& spec, uint64_t seed) : spec_(spec), rng_(seed) {
    vs_ = spec.voxel_size;
    n_[0] = std::llround(spec.size_x / vs_);
    n_[1] = std::llround(spec.size_y / vs_);
    n_[2] = std::llround(spec.size_z / vs_);
    wt_ = std::max<int64_t>(1, std::llround(spec.wall_thickness / vs_));
    ms_ = static_cast<int64_t>(std::ceil(spec.min_room_side / vs_ - 1e-9));
    dw_ = std::max<int64_t>(1, std::llround(spec.door_width / vs_));
    dh_ = std::max<int64_t>(1, std::llround(spec.door_height / vs_));
  }

  GroundTruthWorld build() {
    GridConfig grid;
    grid.voxel_size = vs_;
    world_ = GroundTruthWorld(grid, {n_[0], n_[1], n_[2]}, Pose());
    shell();
    rooms_.push_back(Rect{{wt_, wt_}, {n_[0] - wt_, n_[1] - wt_}});
    if (rooms_[0].side(0) < ms_ || rooms_[0].side(1) < ms_) {
      throw Error("generateWorld: footprint too small for a room");
    }
    while (static_cast<int>(rooms_.size()) < spec_.rooms) split();
    placeStart();
    for (size_t r = 0; r < rooms_.size(); ++r) {
      for (int c = 0; c < spec_.clutter_per_room; ++c) clutter(rooms_[r]);
    }
    fillPockets();
    return std::move(world_);
  }

 private:
  static constexpr uint8_t kFloor = static_cast<uint8_t>(SemanticClass::kFloor);
  static constexpr uint8_t kWall = static_cast<uint8_t>(SemanticClass::kWall);
  static constexpr uint8_t kFurniture = static_cast<uint8_t>(SemanticClass::kFurniture);
  static constexpr uint8_t kSofa = static_cast<uint8_t>(SemanticClass::kSofa);

  void fill(int64_t x0, int64_t x1, int64_t y0, int64_t y1, int64_t z0, int64_t z1, uint8_t label) {
    x0 = std::max<int64_t>(x0, 0), y0 = std::max<int64_t>(y0, 0), z0 = std::max<int64_t>(z0, 0);
    x1 = std::min(x1, n_[0]), y1 = std::min(y1, n_[1]), z1 = std::min(z1, n_[2]);
    for (int64_t z = z0; z < z1; ++z)
      for (int64_t y = y0; y < y1; ++y)
        for (int64_t x = x0; x < x1; ++x) world_.setLabel({x, y, z}, label);
  }

  void shell() {
    fill(0, n_[0], 0, n_[1], 0, 1, kFloor);
    fill(0, n_[0], 0, n_[1], n_[2] - 1, n_[2], kWall);
    fill(0, wt_, 0, n_[1], 1, n_[2] - 1, kWall);
    fill(n_[0] - wt_, n_[0], 0, n_[1], 1, n_[2] - 1, kWall);
    fill(0, n_[0], 0, wt_, 1, n_[2] - 1, kWall);
    fill(0, n_[0], n_[1] - wt_, n_[1], 1, n_[2] - 1, kWall);
  }

  bool blocksDoor(const Rect& room, int axis, int64_t p) const {
    const int other = 1 - axis;
    for (const Door& d : doors_) {
      if (d.along != axis) continue;
      if (d.wall_hi < room.lo[other] - wt_ || d.wall_lo > room.hi[other] + wt_) continue;
      if (p + wt_ + wt_ > d.d0 && p - wt_ < d.d1) return true;
    }
    return false;
  }

  void split() {
    std::vector<size_t> order(rooms_.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](size_t a, size_t b) { return rooms_[a].area() > rooms_[b].area(); });
    for (size_t idx : order) {
      const Rect room = rooms_[idx];
      const int first = room.side(0) >= room.side(1) ? 0 : 1;
      for (int axis : {first, 1 - first}) {
        const int64_t pmin = room.lo[axis] + ms_;
        const int64_t pmax = room.hi[axis] - wt_ - ms_;
        if (pmin > pmax) continue;
        const int other = 1 - axis;
        if (room.side(other) < dw_) continue;
        for (int attempt = 0; attempt < 32; ++attempt) {
          const int64_t p = rng_.uniformInt(pmin, pmax);
          if (blocksDoor(room, axis, p)) continue;
          wall(room, axis, p);
          Rect a = room, b = room;
          a.hi[axis] = p;
          b.lo[axis] = p + wt_;
          rooms_[idx] = a;
          rooms_.push_back(b);
          return;
        }
      }
    }
    throw Error("generateWorld: cannot fit " + std::to_string(spec_.rooms) +
                " rooms with the requested minimum side");
  }

  void wall(const Rect& room, int axis, int64_t p) {
    const int other = 1 - axis;
    int64_t lo[2], hi[2];
    lo[axis] = p;
    hi[axis] = p + wt_;
    lo[other] = room.lo[other];
    hi[other] = room.hi[other];
    fill(lo[0], hi[0], lo[1], hi[1], 1, n_[2] - 1, kWall);
    const int64_t d0 = rng_.uniformInt(room.lo[other], room.hi[other] - dw_);
    lo[other] = d0;
    hi[other] = d0 + dw_;
    fill(lo[0], hi[0], lo[1], hi[1], 1, std::min(1 + dh_, n_[2] - 1), 0);
    doors_.push_back(Door{other, p, p + wt_, d0, d0 + dw_});
  }

  void placeStart() {
    const Rect& r = rooms_[0];
    const int64_t cx = (r.lo[0] + r.hi[0]) / 2;
    const int64_t cy = (r.lo[1] + r.hi[1]) / 2;
    const int64_t cz = static_cast<int64_t>(std::floor(spec_.start_height / vs_));
    start_ = Point((cx + 0.5) * vs_, (cy + 0.5) * vs_, (cz + 0.5) * vs_);
    world_.setStart(Pose(start_, 0.0));
  }

  // Distance in the xy plane from a point to a footprint given in meters.
  static double rectDistance(double px, double py, double x0, double y0, double x1, double y1) {
    const double dx = std::max({x0 - px, 0.0, px - x1});
    const double dy = std::max({y0 - py, 0.0, py - y1});
    return std::hypot(dx, dy);
  }

  bool footprintAllowed(double x0, double y0, double x1, double y1) const {
    if (rectDistance(start_.x(), start_.y(), x0, y0, x1, y1) < spec_.start_clearance) return false;
    const double keep = spec_.door_width;
    for (const Door& d : doors_) {
      double cx, cy;
      const double mid = 0.5 * (d.d0 + d.d1) * vs_;
      const double wall = 0.5 * (d.wall_lo + d.wall_hi) * vs_;
      if (d.along == 0) {
        cx = mid, cy = wall;
      } else {
        cx = wall, cy = mid;
      }
      if (rectDistance(cx, cy, x0, y0, x1, y1) < keep) return false;
    }
    return true;
  }

  void clutter(const Rect& room) {
    const double rx0 = room.lo[0] * vs_, rx1 = room.hi[0] * vs_;
    const double ry0 = room.lo[1] * vs_, ry1 = room.hi[1] * vs_;
    const double floor_top = vs_;
    const double ceiling = (n_[2] - 1) * vs_;
    for (int attempt = 0; attempt < 30; ++attempt) {
      const double kind = rng_.uniform();
      double sx, sy, h;
      int shape;  // 0 box, 1 cylinder, 2 table
      uint8_t label = kFurniture;
      if (kind < 0.35) {
        shape = 0, sx = rng_.uniform(0.4, 1.2), sy = rng_.uniform(0.4, 1.2), h = rng_.uniform(0.4, 1.4);
      } else if (kind < 0.55) {
        shape = 0, label = kSofa;
        sx = rng_.uniform(1.4, 2.0), sy = rng_.uniform(0.7, 0.9), h = rng_.uniform(0.7, 0.9);
        if (rng_.bernoulli(0.5)) std::swap(sx, sy);
      } else if (kind < 0.8) {
        shape = 1, sx = sy = 2.0 * rng_.uniform(0.15, 0.4), h = rng_.uniform(0.6, 2.0);
      } else {
        shape = 2, sx = rng_.uniform(0.8, 1.4), sy = rng_.uniform(0.8, 1.4), h = rng_.uniform(0.72, 0.8);
      }
      if (spec_.extruded) {
        if (shape == 2) shape = 0;
        h = ceiling - floor_top;
      }
      if (sx > rx1 - rx0 || sy > ry1 - ry0) continue;
      const double x0 = rng_.uniform(rx0, rx1 - sx);
      const double y0 = rng_.uniform(ry0, ry1 - sy);
      const double x1 = x0 + sx, y1 = y0 + sy;
      if (!footprintAllowed(x0, y0, x1, y1)) continue;
      const int64_t z0 = 1;
      const int64_t z1 = std::min<int64_t>(n_[2] - 1, 1 + std::llround(h / vs_));
      auto ix = [&](double m) { return static_cast<int64_t>(std::floor(m / vs_)); };
      if (shape == 0) {
        fill(ix(x0), ix(x1) + 1, ix(y0), ix(y1) + 1, z0, z1, label);
      } else if (shape == 1) {
        const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1), r = 0.5 * sx;
        for (int64_t y = ix(y0); y <= ix(y1); ++y) {
          for (int64_t x = ix(x0); x <= ix(x1); ++x) {
            const double px = (x + 0.5) * vs_ - cx, py = (y + 0.5) * vs_ - cy;
            if (px * px + py * py <= r * r) fill(x, x + 1, y, y + 1, z0, z1, label);
          }
        }
      } else {
        const int64_t top0 = std::max<int64_t>(z0, z1 - 1);
        fill(ix(x0), ix(x1) + 1, ix(y0), ix(y1) + 1, top0, z1, label);
        const int64_t leg = 1;
        for (int64_t lx : {ix(x0), ix(x1) + 1 - leg}) {
          for (int64_t ly : {ix(y0), ix(y1) + 1 - leg}) fill(lx, lx + leg, ly, ly + leg, z0, top0, label);
        }
      }
      return;
    }
  }

  void fillPockets() {
    const VoxelIndex s = worldToIndex(start_, vs_);
    if (world_.occupied(s)) throw Error("generateWorld: start voxel is occupied");
    std::vector<uint8_t> seen(world_.volume(), 0);
    std::deque<VoxelIndex> queue{s};
    seen[world_.linear(s)] = 1;
    static constexpr int64_t kNbr[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
    while (!queue.empty()) {
      const VoxelIndex v = queue.front();
      queue.pop_front();
      for (const auto& d : kNbr) {
        const VoxelIndex n{v.x + d[0], v.y + d[1], v.z + d[2]};
        if (world_.occupied(n)) continue;
        const size_t li = world_.linear(n);
        if (seen[li]) continue;
        seen[li] = 1;
        queue.push_back(n);
      }
    }
    for (int64_t z = 0; z < n_[2]; ++z)
      for (int64_t y = 0; y < n_[1]; ++y)
        for (int64_t x = 0; x < n_[0]; ++x) {
          const VoxelIndex v{x, y, z};
          const size_t li = world_.linear(v);
          if (world_.labels()[li] == 0 && !seen[li]) world_.setLabel(v, kWall);
        }
  }

  const WorldSpec& spec_;
  Rng rng_;
  double vs_;
  int64_t n_[3];
  int64_t wt_, ms_, dw_, dh_;
  GroundTruthWorld world_;
  std::vector<Rect> rooms_;
  std::vector<Door> doors_;
  Point start_ = Point::Zero();
};

}  // namespace

GroundTruthWorld generateWorld(const WorldSpec& spec, uint64_t seed) {
  spec.validate();
  return Builder(spec, seed).build();
}

void writeWorld(const GroundTruthWorld& world, std::ostream& out) {
  const auto& d = world.dims();
  const Pose& s = world.start();
  out << "voxplore-world 1\n";
  out << "voxel_size " << formatDouble(world.gridConfig().voxel_size) << '\n';
  out << "dims " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
  out << "start " << formatDouble(s.x()) << ' ' << formatDouble(s.y()) << ' ' << formatDouble(s.z())
      << ' ' << formatDouble(s.yaw) << '\n';
  std::vector<std::pair<uint8_t, size_t>> runs;
  for (uint8_t l : world.labels()) {
    if (!runs.empty() && runs.back().first == l) {
      ++runs.back().second;
    } else {
      runs.emplace_back(l, 1);
    }
  }
  out << "runs " << runs.size() << '\n';
  for (const auto& [l, n] : runs) out << static_cast<int>(l) << ' ' << n << '\n';
  out << "end\n";
}

void saveWorld(const GroundTruthWorld& world, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  writeWorld(world, out);
}

GroundTruthWorld readWorld(std::istream& in) {
  std::string line;
  size_t line_no = 0;
  auto fail = [&](const std::string& what) {
    return Error("world file: line " + std::to_string(line_no) + ": " + what);
  };
  auto next = [&](const char* key, size_t fields) {
    ++line_no;
    if (!std::getline(in, line)) throw fail(std::string("missing '") + key + "'");
    auto t = splitWhitespace(line);
    if (t.size() != fields + 1 || t[0] != key) throw fail(std::string("expected '") + key + "'");
    return t;
  };
  if (next("voxplore-world", 1)[1] != "1") throw fail("unsupported version");
  GridConfig grid;
  if (!parseDouble(next("voxel_size", 1)[1], grid.voxel_size) || !(grid.voxel_size > 0.0)) {
    throw fail("bad voxel_size");
  }
  std::array<int64_t, 3> dims{};
  {
    auto t = next("dims", 3);
    for (int a = 0; a < 3; ++a) {
      if (!parseInt(t[a + 1], dims[a]) || dims[a] <= 0) throw fail("bad dims");
    }
  }
  double s[4];
  {
    auto t = next("start", 4);
    for (int a = 0; a < 4; ++a) {
      if (!parseDouble(t[a + 1], s[a])) throw fail("bad start");
    }
  }
  size_t runs = 0;
  if (!parseInt(next("runs", 1)[1], runs)) throw fail("bad run count");
  GroundTruthWorld world(grid, dims, Pose(s[0], s[1], s[2], s[3]));
  size_t offset = 0;
  const size_t volume = world.volume();
  for (size_t r = 0; r < runs; ++r) {
    ++line_no;
    if (!std::getline(in, line)) throw fail("truncated runs");
    auto t = splitWhitespace(line);
    int label = 0;
    size_t len = 0;
    if (t.size() != 2 || !parseInt(t[0], label) || !parseInt(t[1], len) || label < 0 || label > 255) {
      throw fail("malformed run");
    }
    if (offset + len > volume) throw fail("runs exceed world volume");
    if (label != 0) {
      for (size_t i = offset; i < offset + len; ++i) {
        const int64_t x = static_cast<int64_t>(i % dims[0]);
        const int64_t y = static_cast<int64_t>((i / dims[0]) % dims[1]);
        const int64_t z = static_cast<int64_t>(i / (dims[0] * dims[1]));
        world.setLabel({x, y, z}, static_cast<uint8_t>(label));
      }
    }
    offset += len;
  }
  if (offset != volume) throw fail("runs do not cover the world");
  next("end", 0);
  return world;
}

GroundTruthWorld loadWorld(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open world file '" + path + "'");
  return readWorld(in);
}

}  // namespace voxplore
