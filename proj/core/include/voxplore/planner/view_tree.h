#pragma once

#include <cstdint>
#include <vector>

#include "voxplore/grid.h"

namespace voxplore {

struct PlannerNode {
  Pose pose;
  double gain = 0.0;       // g
  double cost = 0.0;       // c, edge cost from the parent; 0 at the root
  int parent = -1;
  std::vector<int> children;
  // Derived by ViewTree::update().
  double path_gain = 0.0;  // sum of g from the root
  double path_cost = 0.0;  // sum of c from the root
  double utility = 0.0;    // u
  uint64_t gain_version = 0;
};

/// Tree of candidate views. Node 0 is the root. The utility of a node is the
/// best gain/cost ratio of any root path that ends inside its subtree.
class ViewTree {
 public:
  ViewTree() = default;
  explicit ViewTree(const Pose& root) { reset(root); }

  void reset(const Pose& root);

  int addNode(const Pose& pose, double gain, int parent, double cost);
  void setParent(int node, int parent, double cost);
  /// Recomputes path sums and utilities of the whole tree.
  void update();

  const PlannerNode& node(int i) const { return nodes_[i]; }
  PlannerNode& mutableNode(int i) { return nodes_[i]; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<PlannerNode>& nodes() const { return nodes_; }

  /// Gain/cost ratio of the root path ending at i; 0 for the root.
  double pathRatio(int i) const {
    return nodes_[i].path_cost > 0.0 ? nodes_[i].path_gain / nodes_[i].path_cost : 0.0;
  }
  bool isAncestor(int ancestor, int node) const;
  /// Root child with the highest utility (lowest index on ties), or -1.
  int bestChild() const;
  /// Node inside `subtree` whose path ratio equals the subtree utility
  /// (lowest index on ties).
  int bestLeafIn(int subtree) const;
  /// Nodes from the root child down to `node`, inclusive.
  std::vector<int> pathTo(int node) const;

  /// Makes `child` (a child of the root) the new root, keeping only its
  /// subtree. Returns the old-to-new index map (-1 for discarded nodes).
  std::vector<int> reroot(int child);
  /// Removes a leaf. Indices above it shift down by one.
  void removeLeaf(int leaf);

 private:
  std::vector<PlannerNode> nodes_;
};

}  // namespace voxplore
