#include "voxplore/planner/view_tree.h"

#include <algorithm>

namespace voxplore {

void ViewTree::reset(const Pose& root) {
  nodes_.clear();
  PlannerNode r;
  r.pose = root;
  nodes_.push_back(r);
}

int ViewTree::addNode(const Pose& pose, double gain, int parent, double cost) {
  if (parent < 0 || parent >= size()) throw Error("ViewTree::addNode: bad parent");
  if (!(cost > 0.0)) throw Error("ViewTree::addNode: non-root nodes need positive cost");
  if (!(gain >= 0.0)) throw Error("ViewTree::addNode: gain must be non-negative");
  PlannerNode n;
  n.pose = pose;
  n.gain = gain;
  n.cost = cost;
  n.parent = parent;
  const int id = size();
  nodes_.push_back(n);
  nodes_[parent].children.push_back(id);
  return id;
}

void ViewTree::setParent(int node, int parent, double cost) {
  if (node <= 0 || node >= size() || parent < 0 || parent >= size()) {
    throw Error("ViewTree::setParent: bad index");
  }
  if (isAncestor(node, parent)) throw Error("ViewTree::setParent: would create a cycle");
  if (!(cost > 0.0)) throw Error("ViewTree::setParent: cost must be positive");
  auto& old = nodes_[nodes_[node].parent].children;
  old.erase(std::find(old.begin(), old.end(), node));
  nodes_[node].parent = parent;
  nodes_[node].cost = cost;
  nodes_[parent].children.push_back(node);
}

bool ViewTree::isAncestor(int ancestor, int node) const {
  for (int i = node; i >= 0; i = nodes_[i].parent) {
    if (i == ancestor) return true;
  }
  return false;
}

void ViewTree::update() {
  // Pre-order walk for path sums, then reverse order for utilities.
  std::vector<int> order;
  order.reserve(nodes_.size());
  order.push_back(0);
  nodes_[0].path_gain = 0.0;
  nodes_[0].path_cost = 0.0;
  for (size_t k = 0; k < order.size(); ++k) {
    const PlannerNode& n = nodes_[order[k]];
    for (int c : n.children) {
      nodes_[c].path_gain = n.path_gain + nodes_[c].gain;
      nodes_[c].path_cost = n.path_cost + nodes_[c].cost;
      order.push_back(c);
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    PlannerNode& n = nodes_[*it];
    double u = pathRatio(*it);
    for (int c : n.children) u = std::max(u, nodes_[c].utility);
    n.utility = u;
  }
}

int ViewTree::bestChild() const {
  int best = -1;
  for (int c : nodes_[0].children) {
    if (best < 0 || nodes_[c].utility > nodes_[best].utility ||
        (nodes_[c].utility == nodes_[best].utility && c < best)) {
      best = c;
    }
  }
  return best;
}

int ViewTree::bestLeafIn(int subtree) const {
  const double u = nodes_[subtree].utility;
  int best = -1;
  std::vector<int> stack{subtree};
  while (!stack.empty()) {
    const int i = stack.back();
    stack.pop_back();
    if (pathRatio(i) == u && (best < 0 || i < best)) best = i;
    for (int c : nodes_[i].children) {
      if (nodes_[c].utility == u) stack.push_back(c);
    }
  }
  return best < 0 ? subtree : best;
}

std::vector<int> ViewTree::pathTo(int node) const {
  std::vector<int> path;
  for (int i = node; i > 0; i = nodes_[i].parent) path.push_back(i);
  std::reverse(path.begin(), path.end());
  return path;
}

std::vector<int> ViewTree::reroot(int child) {
  if (child <= 0 || child >= size() || nodes_[child].parent != 0) {
    throw Error("ViewTree::reroot: node is not a root child");
  }
  std::vector<int> remap(nodes_.size(), -1);
  std::vector<int> keep{child};
  for (size_t k = 0; k < keep.size(); ++k) {
    for (int c : nodes_[keep[k]].children) keep.push_back(c);
  }
  std::sort(keep.begin(), keep.end());
  // The new root must come first.
  keep.erase(std::find(keep.begin(), keep.end(), child));
  keep.insert(keep.begin(), child);
  for (size_t i = 0; i < keep.size(); ++i) remap[keep[i]] = static_cast<int>(i);
  std::vector<PlannerNode> next;
  next.reserve(keep.size());
  for (int old : keep) {
    PlannerNode n = nodes_[old];
    n.parent = n.parent >= 0 ? remap[n.parent] : -1;
    for (int& c : n.children) c = remap[c];
    next.push_back(std::move(n));
  }
  next[0].parent = -1;
  next[0].gain = 0.0;
  next[0].cost = 0.0;
  nodes_ = std::move(next);
  update();
  return remap;
}

void ViewTree::removeLeaf(int leaf) {
  if (leaf <= 0 || leaf >= size() || !nodes_[leaf].children.empty()) {
    throw Error("ViewTree::removeLeaf: not a removable leaf");
  }
  auto& sib = nodes_[nodes_[leaf].parent].children;
  sib.erase(std::find(sib.begin(), sib.end(), leaf));
  nodes_.erase(nodes_.begin() + leaf);
  for (PlannerNode& n : nodes_) {
    if (n.parent > leaf) --n.parent;
    for (int& c : n.children) {
      if (c > leaf) --c;
    }
  }
}

}  // namespace voxplore
