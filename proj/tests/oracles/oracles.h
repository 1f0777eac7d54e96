#pragma once

// Independent reference implementations. They share no code with the
// library beyond plain data types, and favour obviousness over speed.

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <optional>
#include <set>
#include <vector>

#include "voxplore/grid.h"

namespace oracle {

using voxplore::Point;
using voxplore::VoxelIndex;

// Direct Bayesian product over independent observations:
// P = prod p / (prod p + prod (1 - p)), prior 0.5. Computed in log space
// only to dodge underflow; no log-odds accumulation involved.
inline double bayesProduct(const std::vector<double>& ps) {
  long double log_occ = 0.0L, log_free = 0.0L;
  for (double p : ps) {
    log_occ += std::log(static_cast<long double>(p));
    log_free += std::log1p(-static_cast<long double>(p));
  }
  const long double m = std::max(log_occ, log_free);
  const long double a = std::exp(log_occ - m), b = std::exp(log_free - m);
  return static_cast<double>(a / (a + b));
}

// Slab test of a segment against an axis-aligned voxel box. Returns the
// parameter interval [t0, t1] (in units of |dir|) clipped to [0, len].
inline std::optional<std::pair<double, double>> segmentBox(const Point& o, const Point& dir, double len,
                                                           const VoxelIndex& v, double vs) {
  double t0 = 0.0, t1 = len;
  for (int a = 0; a < 3; ++a) {
    const double lo = static_cast<double>(v[a]) * vs, hi = lo + vs;
    if (dir[a] == 0.0) {
      if (o[a] < lo || o[a] >= hi) return std::nullopt;
      continue;
    }
    double ta = (lo - o[a]) / dir[a], tb = (hi - o[a]) / dir[a];
    if (ta > tb) std::swap(ta, tb);
    t0 = std::max(t0, ta);
    t1 = std::min(t1, tb);
  }
  if (t0 > t1) return std::nullopt;
  return std::make_pair(t0, t1);
}

// Every voxel the segment passes through with positive length, found by
// brute force over the segment's bounding box.
inline std::set<VoxelIndex> voxelsOnSegment(const Point& o, const Point& unit_dir, double len, double vs,
                                            double min_len = 1e-9) {
  const Point e = o + unit_dir * len;
  std::set<VoxelIndex> out;
  VoxelIndex lo, hi;
  for (int a = 0; a < 3; ++a) {
    lo[a] = static_cast<int64_t>(std::floor(std::min(o[a], e[a]) / vs)) - 1;
    hi[a] = static_cast<int64_t>(std::floor(std::max(o[a], e[a]) / vs)) + 1;
  }
  for (int64_t z = lo.z; z <= hi.z; ++z)
    for (int64_t y = lo.y; y <= hi.y; ++y)
      for (int64_t x = lo.x; x <= hi.x; ++x) {
        auto iv = segmentBox(o, unit_dir, len, {x, y, z}, vs);
        if (iv && iv->second - iv->first > min_len) out.insert({x, y, z});
      }
  return out;
}

// Utility of every node by enumerating all root-to-node paths: the best
// gain/cost ratio among paths that end in the node's subtree.
inline std::vector<double> utilitiesByEnumeration(const std::vector<int>& parent, const std::vector<double>& gain,
                                                  const std::vector<double>& cost) {
  const size_t n = parent.size();
  std::vector<double> ratio(n, 0.0);
  for (size_t i = 1; i < n; ++i) {
    // Sum along the root-to-node path, root end first.
    std::vector<int> path;
    for (int k = static_cast<int>(i); k > 0; k = parent[k]) path.push_back(k);
    double g = 0.0, c = 0.0;
    for (auto it = path.rbegin(); it != path.rend(); ++it) g += gain[*it], c += cost[*it];
    ratio[i] = g / c;
  }
  std::vector<double> util(n, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double best = (i == 0) ? -std::numeric_limits<double>::infinity() : ratio[i];
    for (size_t j = 1; j < n; ++j) {
      bool below = false;
      for (int k = static_cast<int>(j); k >= 0; k = parent[k]) {
        if (k == static_cast<int>(i)) { below = true; break; }
        if (k == 0) break;
      }
      if (below) best = std::max(best, ratio[j]);
    }
    util[i] = std::isfinite(best) ? best : 0.0;
  }
  return util;
}

// Dense grid with a BFS flood fill, used against the observable space.
struct DenseGrid {
  int nx = 0, ny = 0, nz = 0;
  std::vector<char> occ;
  char at(int x, int y, int z) const {
    if (x < 0 || y < 0 || z < 0 || x >= nx || y >= ny || z >= nz) return 1;
    return occ[x + nx * (y + ny * z)];
  }
};

// Free voxels 6-connected to `start` plus occupied in-grid voxels sharing a
// face with them.
inline std::set<VoxelIndex> observableByBfs(const DenseGrid& g, VoxelIndex start) {
  std::set<VoxelIndex> free_set, shell;
  std::deque<VoxelIndex> q{start};
  free_set.insert(start);
  const int d[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  while (!q.empty()) {
    VoxelIndex v = q.front();
    q.pop_front();
    for (auto& s : d) {
      VoxelIndex n{v.x + s[0], v.y + s[1], v.z + s[2]};
      const bool inside = n.x >= 0 && n.y >= 0 && n.z >= 0 && n.x < g.nx && n.y < g.ny && n.z < g.nz;
      if (!inside) continue;
      if (g.at(n.x, n.y, n.z)) {
        shell.insert(n);
      } else if (free_set.insert(n).second) {
        q.push_back(n);
      }
    }
  }
  free_set.insert(shell.begin(), shell.end());
  return free_set;
}

// Line of sight by point sampling along the segment at a fine step: every
// sample must fall in a non-blocking voxel (the target excluded). Samples
// that land within `edge` of a voxel face are skipped, so grazing contacts
// with blockers do not count.
template <typename Blocking>
bool lineOfSight(const Point& from, const Point& to, const VoxelIndex& target, double vs, Blocking&& blocking,
                 double step_fraction = 0.02) {
  const Point d = to - from;
  const double len = d.norm();
  const int n = std::max(1, static_cast<int>(std::ceil(len / (vs * step_fraction))));
  const double edge = 1e-7;
  for (int i = 0; i < n; ++i) {
    const Point p = from + d * (static_cast<double>(i) / n);
    bool on_face = false;
    VoxelIndex v;
    for (int a = 0; a < 3; ++a) {
      const double u = p[a] / vs;
      const double f = u - std::floor(u);
      if (f < edge || f > 1.0 - edge) on_face = true;
      v[a] = static_cast<int64_t>(std::floor(u));
    }
    if (on_face || v == target) continue;
    if (blocking(v)) return false;
  }
  return true;
}

}  // namespace oracle
