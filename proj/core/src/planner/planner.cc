#include "voxplore/planner/planner.h"

#include <algorithm>
#include <map>

namespace voxplore {

void PlannerConfig::validate() const {
  if (!(sampling_radius > 0.0 && max_edge_length > 0.0 && collision_radius > 0.0)) {
    throw Error("PlannerConfig: radii and edge length must be positive");
  }
  if (max_tree_size < 2) throw Error("PlannerConfig: tree must hold at least two nodes");
  rays.validate();
  motion.validate();
}

Planner::Planner(PlannerConfig config, SensorModel sensor, Aabb bounds, uint64_t seed)
    : config_(config),
      bounds_(bounds),
      sample_bounds_(bounds.shrunk(config.collision_radius)),
      evaluator_(sensor, config.rays, bounds),
      rng_(seed) {
  config_.validate();
}

void Planner::reset(const Pose& root) { tree_.reset(root); }

double Planner::bestUtility() const { return tree_.size() > 0 ? tree_.node(0).utility : 0.0; }

bool Planner::segmentFree(const MultiLayerMap& map, const Point& a, const Point& b) const {
  return map.isSegmentTraversable(a, b, config_.collision, config_.collision_radius);
}

namespace {

bool improves(double candidate, double current) {
  return candidate > current + 1e-12 * std::max(1.0, std::abs(current));
}

}  // namespace

bool Planner::pruneOne() {
  std::vector<int> leaves;
  for (int i = 1; i < tree_.size(); ++i) {
    const PlannerNode& n = tree_.node(i);
    if (n.children.empty() && n.utility <= 0.0) leaves.push_back(i);
  }
  if (leaves.empty()) return false;
  tree_.removeLeaf(leaves[rng_.uniformInt(0, static_cast<int64_t>(leaves.size()) - 1)]);
  tree_.update();
  return true;
}

void Planner::refreshNode(int i, const MultiLayerMap& map, uint64_t map_version) {
  PlannerNode& n = tree_.mutableNode(i);
  const YawOptimum y = evaluator_.optimizeYaw(n.pose.position, map, config_.gain, config_.raycast);
  n.pose = Pose(n.pose.position, y.yaw);
  n.gain = i == 0 ? 0.0 : y.gain;
  n.gain_version = map_version;
  const auto cost = [&](int from, int to) {
    return std::max(1e-9, edgeCost(tree_.node(from).pose, tree_.node(to).pose, config_.motion));
  };
  if (i != 0) tree_.mutableNode(i).cost = cost(tree_.node(i).parent, i);
  for (int c : tree_.node(i).children) tree_.mutableNode(c).cost = cost(i, c);
}

int Planner::expand(const MultiLayerMap& map, uint64_t map_version, int samples) {
  if (tree_.size() == 0) throw Error("Planner::expand: tree has no root");
  int added = 0;
  const double r = config_.sampling_radius;
  for (int s = 0; s < samples; ++s) {
    if (tree_.size() >= config_.max_tree_size && !pruneOne()) break;
    const int base = static_cast<int>(rng_.uniformInt(0, tree_.size() - 1));
    Point off;
    do {
      off = Point(rng_.uniform(-r, r), rng_.uniform(-r, r), rng_.uniform(-r, r));
    } while (off.squaredNorm() > r * r);
    if (off.norm() > config_.max_edge_length) off *= config_.max_edge_length / off.norm();
    const Point p = tree_.node(base).pose.position + off;
    if (!sample_bounds_.contains(p)) continue;
    if (!map.isTraversable(p, config_.collision, config_.collision_radius)) continue;

    const YawOptimum y = evaluator_.optimizeYaw(p, map, config_.gain, config_.raycast);
    const Pose pose(p, y.yaw);

    struct Candidate {
      double ratio;
      int node;
      double cost;
    };
    std::vector<Candidate> candidates;
    for (int j = 0; j < tree_.size(); ++j) {
      const PlannerNode& n = tree_.node(j);
      if ((n.pose.position - p).norm() > config_.max_edge_length) continue;
      const double c = std::max(1e-9, edgeCost(n.pose, pose, config_.motion));
      candidates.push_back({(n.path_gain + y.gain) / (n.path_cost + c), j, c});
    }
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
      return a.ratio != b.ratio ? a.ratio > b.ratio : a.node < b.node;
    });
    for (const Candidate& c : candidates) {
      if (!segmentFree(map, tree_.node(c.node).pose.position, p)) continue;
      const int id = tree_.addNode(pose, y.gain, c.node, c.cost);
      tree_.mutableNode(id).gain_version = map_version;
      tree_.update();
      rewireFrom({id}, map);
      ++added;
      break;
    }
  }
  return added;
}

void Planner::rewire(const MultiLayerMap& map) {
  tree_.update();
  std::vector<int> all;
  for (int i = 1; i < tree_.size(); ++i) all.push_back(i);
  rewireFrom(std::move(all), map);
}

void Planner::rewireFrom(std::vector<int> work, const MultiLayerMap& map) {
  std::map<std::pair<int, int>, bool> free_memo;
  auto edgeFree = [&](int a, int b) {
    const auto key = std::minmax(a, b);
    auto it = free_memo.find(key);
    if (it != free_memo.end()) return it->second;
    const bool ok = segmentFree(map, tree_.node(a).pose.position, tree_.node(b).pose.position);
    free_memo.emplace(key, ok);
    return ok;
  };
  auto cost = [&](int from, int to) {
    return std::max(1e-9, edgeCost(tree_.node(from).pose, tree_.node(to).pose, config_.motion));
  };
  auto near = [&](int a, int b) {
    return (tree_.node(a).pose.position - tree_.node(b).pose.position).norm() <= config_.max_edge_length;
  };
  // Moves node i under parent p and queues everything whose sums changed.
  int moves = 0;
  auto adopt = [&](int i, int p, double c) {
    tree_.setParent(i, p, c);
    tree_.update();
    ++moves;
    std::vector<int> stack{i};
    while (!stack.empty()) {
      const int k = stack.back();
      stack.pop_back();
      work.push_back(k);
      for (int ch : tree_.node(k).children) stack.push_back(ch);
    }
  };

  while (!work.empty() && moves < config_.max_rewire_moves) {
    const int q = work.back();
    work.pop_back();
    if (q <= 0 || q >= tree_.size()) continue;
    // q looks for a better parent.
    {
      int best = -1;
      double best_ratio = tree_.pathRatio(q), best_cost = 0.0;
      for (int p = 0; p < tree_.size(); ++p) {
        if (p == q || p == tree_.node(q).parent || !near(p, q)) continue;
        const double c = cost(p, q);
        const PlannerNode& pn = tree_.node(p);
        const double r = (pn.path_gain + tree_.node(q).gain) / (pn.path_cost + c);
        // cheap tests first
        if (improves(r, best_ratio) && !tree_.isAncestor(q, p) && edgeFree(p, q)) {
          best = p, best_ratio = r, best_cost = c;
        }
      }
      if (best >= 0) {
        adopt(q, best, best_cost);
        continue;
      }
    }
    // Other nodes consider q as their parent.
    for (int i = 1; i < tree_.size() && moves < config_.max_rewire_moves; ++i) {
      if (i == q || tree_.node(i).parent == q || !near(i, q)) continue;
      const double c = cost(q, i);
      const PlannerNode& qn = tree_.node(q);
      const double r = (qn.path_gain + tree_.node(i).gain) / (qn.path_cost + c);
      if (improves(r, tree_.pathRatio(i)) && !tree_.isAncestor(i, q) && edgeFree(q, i)) adopt(i, q, c);
    }
  }
}

void Planner::removeSubtree(int i) {
  std::vector<int> doomed{i};
  for (size_t k = 0; k < doomed.size(); ++k) {
    for (int c : tree_.node(doomed[k]).children) doomed.push_back(c);
  }
  // Leaves first, so every removal is legal.
  while (!doomed.empty()) {
    for (size_t k = 0; k < doomed.size(); ++k) {
      if (tree_.node(doomed[k]).children.empty()) {
        const int leaf = doomed[k];
        tree_.removeLeaf(leaf);
        doomed.erase(doomed.begin() + static_cast<long>(k));
        for (int& d : doomed) {
          if (d > leaf) --d;
        }
        break;
      }
    }
  }
  tree_.update();
}

std::optional<Planner::Selection> Planner::select(const MultiLayerMap& map, uint64_t map_version) {
  if (tree_.size() == 0) throw Error("Planner::select: tree has no root");
  for (int guard = 0; guard < 4 * config_.max_tree_size + 8; ++guard) {
    tree_.update();
    const int b = tree_.bestChild();
    if (b < 0 || !(tree_.node(b).utility > 0.0)) return std::nullopt;
    const std::vector<int> path = tree_.pathTo(tree_.bestLeafIn(b));
    bool refreshed = false;
    for (int i : path) {
      if (tree_.node(i).gain_version != map_version) {
        refreshNode(i, map, map_version);
        refreshed = true;
      }
    }
    if (refreshed) continue;
    if (!segmentFree(map, tree_.node(0).pose.position, tree_.node(b).pose.position)) {
      removeSubtree(b);
      continue;
    }
    Selection sel{tree_.node(b).pose, tree_.node(b).utility, tree_.node(b).cost};
    tree_.reroot(b);
    return sel;
  }
  return std::nullopt;
}

}  // namespace voxplore
