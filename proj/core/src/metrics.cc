#include "voxplore/metrics.h"

#include <algorithm>
#include <cmath>
#include <deque>

namespace voxplore {

size_t ObservableSpace::occupiedCount() const {
  return static_cast<size_t>(std::count(occupied.begin(), occupied.end(), 1));
}

ObservableSpace ObservableSpace::compute(const GroundTruthWorld& world, const Point& start) {
  const VoxelIndex s = worldToIndex(start, world.gridConfig());
  if (!world.contains(s)) throw Error("ObservableSpace: start outside the world");
  if (world.occupied(s)) throw Error("ObservableSpace: start voxel is occupied");
  // 0 unseen, 1 free reached, 2 occupied shell
  std::vector<uint8_t> mark(world.volume(), 0);
  std::deque<VoxelIndex> queue{s};
  mark[world.linear(s)] = 1;
  static constexpr int64_t kNbr[6][3] = {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}};
  while (!queue.empty()) {
    const VoxelIndex v = queue.front();
    queue.pop_front();
    for (const auto& d : kNbr) {
      const VoxelIndex n{v.x + d[0], v.y + d[1], v.z + d[2]};
      if (!world.contains(n)) continue;
      uint8_t& m = mark[world.linear(n)];
      if (m) continue;
      if (world.occupied(n)) {
        m = 2;
      } else {
        m = 1;
        queue.push_back(n);
      }
    }
  }
  ObservableSpace out;
  out.grid = world.gridConfig();
  const auto& dims = world.dims();
  for (int64_t x = 0; x < dims[0]; ++x)
    for (int64_t y = 0; y < dims[1]; ++y)
      for (int64_t z = 0; z < dims[2]; ++z) {
        const uint8_t m = mark[world.linear({x, y, z})];
        if (!m) continue;
        out.voxels.push_back({x, y, z});
        out.occupied.push_back(m == 2 ? 1 : 0);
      }
  return out;
}

const char* toString(EvaluationSet s) {
  switch (s) {
    case EvaluationSet::kAllObservable: return "all";
    case EvaluationSet::kObservedOnly: return "observed";
    case EvaluationSet::kPredictedOnly: return "predicted";
  }
  return "?";
}

EvaluationSet evaluationSetFromString(const std::string& s) {
  if (s == "all") return EvaluationSet::kAllObservable;
  if (s == "observed") return EvaluationSet::kObservedOnly;
  if (s == "predicted") return EvaluationSet::kPredictedOnly;
  throw Error("unknown evaluation set '" + s + "'");
}

namespace {

std::optional<double> ratio(size_t num, size_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

}  // namespace

MetricsRecord snapshot(const MultiLayerMap& map, const ObservableSpace& space, int collisions,
                       EvaluationSet set) {
  if (!(map.gridConfig() == space.grid)) throw Error("snapshot: map and ground truth grids differ");
  MetricsRecord r;
  r.collisions = collisions;
  MultiLayerMap::Reader reader(map);
  for (size_t i = 0; i < space.voxels.size(); ++i) {
    const VoxelIndex& v = space.voxels[i];
    const MeasuredVoxel& mv = reader.measuredVoxel(v);
    const bool measured = MeasuredLayer::stateOf(mv) != Occupancy::kUnknown;
    if (set == EvaluationSet::kObservedOnly && !measured) continue;
    if (set == EvaluationSet::kPredictedOnly && measured) continue;
    ++r.n_total;
    if (measured) ++r.n_measured;
    const Occupancy s = reader.lookup(v).state;
    if (s == Occupancy::kUnknown) continue;
    ++r.n_explored;
    const bool gt_occ = space.occupied[i] != 0;
    const bool right = (s == Occupancy::kOccupied) == gt_occ;
    if (right) ++r.n_correct;
    if (gt_occ) ++r.n_gt_occ_seen;
    else ++r.n_gt_free_seen;
    if (s == Occupancy::kOccupied) {
      ++r.n_pred_occ;
      if (right) ++r.n_pred_occ_right;
    } else {
      ++r.n_pred_free;
      if (right) ++r.n_pred_free_right;
    }
  }
  const double n = static_cast<double>(r.n_total);
  r.E = r.n_total ? r.n_explored / n : 0.0;
  r.C = r.n_total ? r.n_correct / n : 0.0;
  r.M = r.n_total ? r.n_measured / n : 0.0;
  r.P = ratio(r.n_correct, r.n_explored);
  r.P_o = ratio(r.n_pred_occ_right, r.n_pred_occ);
  r.P_f = ratio(r.n_pred_free_right, r.n_pred_free);
  r.R_o = ratio(r.n_pred_occ_right, r.n_gt_occ_seen);
  r.R_f = ratio(r.n_pred_free_right, r.n_gt_free_seen);
  return r;
}

std::optional<double> timeToGoal(const Series& series, double goal) {
  if (series.empty()) throw Error("timeToGoal: empty series");
  for (size_t i = 0; i < series.size(); ++i) {
    if (series[i].second < goal) continue;
    if (i == 0 || series[i].second == goal) return series[i].first;
    const auto [t0, f0] = series[i - 1];
    const auto [t1, f1] = series[i];
    return t0 + (goal - f0) / (f1 - f0) * (t1 - t0);
  }
  return std::nullopt;
}

double expectedPerformance(const Series& series, double t_min, double t_max) {
  if (!(t_min < t_max)) throw Error("expectedPerformance: t_min must be below t_max");
  if (series.empty() || series.front().first > t_min || series.back().first < t_max) {
    throw Error("expectedPerformance: series does not cover the interval");
  }
  auto valueAt = [&](double t) {
    auto it = std::lower_bound(series.begin(), series.end(), t,
                               [](const auto& s, double x) { return s.first < x; });
    if (it->first == t) return it->second;
    const auto& b = *it;
    const auto& a = *(it - 1);
    return a.second + (b.second - a.second) * (t - a.first) / (b.first - a.first);
  };
  double area = 0.0;
  double prev_t = t_min, prev_f = valueAt(t_min);
  for (const auto& [t, f] : series) {
    if (t <= t_min) continue;
    if (t >= t_max) break;
    area += 0.5 * (prev_f + f) * (t - prev_t);
    prev_t = t, prev_f = f;
  }
  area += 0.5 * (prev_f + valueAt(t_max)) * (t_max - prev_t);
  return area / (t_max - t_min);
}

void TradeoffWeights::validate() const {
  if (coverage < 0.0 || accuracy < 0.0 || safety < 0.0) throw Error("TradeoffWeights: negative weight");
  if (coverage + accuracy + safety <= 0.0) throw Error("TradeoffWeights: all weights are zero");
}

double tradeoffObjective(const MetricsRecord& record, const TradeoffWeights& w, bool o_safe) {
  w.validate();
  return w.coverage * record.C + w.accuracy * record.P.value_or(0.0) + w.safety * (o_safe ? 1.0 : 0.0);
}

}  // namespace voxplore
