#pragma once

#include <optional>

#include "voxplore/planner/motion.h"
#include "voxplore/planner/view_tree.h"
#include "voxplore/planner/visibility.h"
#include "voxplore/random.h"

namespace voxplore {

struct PlannerConfig {
  double sampling_radius = 1.5;   // m, around a random tree node
  double max_edge_length = 1.5;   // m
  GainRayConfig rays;
  GainKind gain = GainKind::kExploration;
  RaycastMode raycast = RaycastMode::kNonBlocking;
  CollisionMode collision = CollisionMode::kConservative;
  MotionLimits motion;
  double collision_radius = 0.35;  // m
  int max_tree_size = 400;
  /// Upper bound on parent changes per rewiring call.
  int max_rewire_moves = 4000;

  void validate() const;
};

/// Sampling-based next-best-view planner over a ViewTree rooted at the
/// current goal pose.
class Planner {
 public:
  Planner(PlannerConfig config, SensorModel sensor, Aabb bounds, uint64_t seed);

  void reset(const Pose& root);

  /// Draws `samples` candidates; each accepted one is attached to the parent
  /// maximising its path ratio and then the tree is rewired around it.
  /// Returns the number of nodes added.
  int expand(const MultiLayerMap& map, uint64_t map_version, int samples = 1);

  /// Rewires every node until no single parent change strictly improves a
  /// path ratio (or the move budget runs out).
  void rewire(const MultiLayerMap& map);

  struct Selection {
    Pose pose;
    double utility = 0.0;
    double cost = 0.0;
  };

  /// Refreshes stale gains along the best branch, then executes its first
  /// node: it becomes the new root and its siblings are dropped. Returns
  /// nullopt when no branch has positive utility.
  std::optional<Selection> select(const MultiLayerMap& map, uint64_t map_version);

  const ViewTree& tree() const { return tree_; }
  ViewTree& mutableTree() { return tree_; }
  GainEvaluator& evaluator() { return evaluator_; }
  const PlannerConfig& config() const { return config_; }
  double bestUtility() const;

  /// Recomputes gain and yaw of one node against the current map.
  void refreshNode(int i, const MultiLayerMap& map, uint64_t map_version);

 private:
  bool segmentFree(const MultiLayerMap& map, const Point& a, const Point& b) const;
  void rewireFrom(std::vector<int> work, const MultiLayerMap& map);
  bool pruneOne();
  void removeSubtree(int i);

  PlannerConfig config_;
  Aabb bounds_;
  Aabb sample_bounds_;
  GainEvaluator evaluator_;
  ViewTree tree_;
  Rng rng_;
};

}  // namespace voxplore
