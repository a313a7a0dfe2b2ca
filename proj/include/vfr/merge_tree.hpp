#pragma once

#include <limits>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "vfr/critical_points.hpp"

namespace vfr {

/// Non-negative perturbation magnitude, or unbounded when no cancellation
/// partner exists. Unbounded compares greater than every finite value.
struct Robustness {
  double value = std::numeric_limits<double>::infinity();

  bool unbounded() const { return std::isinf(value); }
  static Robustness unbounded_value() { return {}; }
  static Robustness finite(double v) { return {v}; }
  auto operator<=>(const Robustness&) const = default;
};

struct MergeTreeNode {
  int id = 0;
  double birth = 0.0;
  int degree_sum = 0;
  int parent = -1;
  std::vector<int> member_cps;  // critical point ids, sorted
  bool is_leaf = false;
};

/// Sublevel-set merge tree of a magnitude field, augmented with per-node
/// degree sums and member critical points.
struct AugmentedMergeTree {
  std::vector<MergeTreeNode> nodes;
  std::unordered_map<int, int> leaf_of_cp;  // cp id -> leaf node id
  std::vector<int> roots;

  const MergeTreeNode& node(int id) const { return nodes[id]; }
};

/// Builds the merge tree of f0 over the mesh. Each critical point is inserted
/// as a Steiner vertex with value 0 connected to its triangle's corners, so
/// critical points are exactly the degree-carrying leaves. Vertices are
/// processed in ascending (value, steiner-first, id) order; component merges
/// become internal nodes at the merging vertex's value.
AugmentedMergeTree build_merge_tree(const TriangleMesh& mesh, std::span<const double> f0,
                                    std::span<const CriticalPoint> cps);

/// Birth value of the critical point's lowest zero-degree ancestor, walking
/// up from its leaf; unbounded when no ancestor up to the root has degree 0.
Robustness classic_robustness(const AugmentedMergeTree& tree, int cp_id);

/// Birth value of the lowest common ancestor of two critical points, i.e.
/// the sublevel threshold at which their components merge.
Robustness merge_value(const AugmentedMergeTree& tree, int cp_a, int cp_b);

std::string merge_tree_to_json(const AugmentedMergeTree& tree);

}  // namespace vfr
