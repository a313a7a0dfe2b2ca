#include "vfr/merge_tree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "vfr/csv.hpp"

namespace vfr {

namespace {

struct ComponentState {
  int node = -1;
  int degree = 0;
  std::vector<int> members;
};

}  // namespace

AugmentedMergeTree build_merge_tree(const TriangleMesh& mesh, std::span<const double> f0,
                                    std::span<const CriticalPoint> cps) {
  const int nv = mesh.vertex_count();
  const int ns = static_cast<int>(cps.size());
  const int total = nv + ns;

  // Graph vertex i < nv is a mesh vertex; i >= nv is the Steiner vertex of
  // cps[i - nv], with value 0.
  std::vector<double> value(total);
  for (int v = 0; v < nv; ++v) value[v] = f0[v];
  for (int s = 0; s < ns; ++s) value[nv + s] = 0.0;

  std::vector<std::vector<int>> adjacency(total);
  for (const auto& [u, v] : mesh.unique_edges()) {
    adjacency[u].push_back(v);
    adjacency[v].push_back(u);
  }
  for (int s = 0; s < ns; ++s) {
    const auto& tri = mesh.triangles[cps[s].triangle];
    for (int corner : tri) {
      adjacency[nv + s].push_back(corner);
      adjacency[corner].push_back(nv + s);
    }
  }

  // Ascending sweep order. Steiner vertices come first among equal values so
  // that a critical point is always born as its own leaf.
  std::vector<int> order(total);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (value[a] != value[b]) return value[a] < value[b];
    const bool steiner_a = a >= nv;
    const bool steiner_b = b >= nv;
    if (steiner_a != steiner_b) return steiner_a;
    return a < b;
  });

  std::vector<int> parent(total);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&parent](int i) {
    while (i != parent[i]) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  };

  std::vector<ComponentState> comp(total);
  std::vector<char> processed(total, 0);

  AugmentedMergeTree tree;
  auto add_node = [&tree](double birth, int degree, std::vector<int> members, bool leaf) {
    MergeTreeNode n;
    n.id = static_cast<int>(tree.nodes.size());
    n.birth = birth;
    n.degree_sum = degree;
    n.member_cps = std::move(members);
    n.is_leaf = leaf;
    tree.nodes.push_back(std::move(n));
    return tree.nodes.back().id;
  };

  for (int u : order) {
    std::vector<int> neighbor_roots;
    for (int w : adjacency[u]) {
      if (!processed[w]) continue;
      const int r = find(w);
      if (std::find(neighbor_roots.begin(), neighbor_roots.end(), r) == neighbor_roots.end()) {
        neighbor_roots.push_back(r);
      }
    }
    processed[u] = 1;

    if (neighbor_roots.empty()) {
      // New component: a leaf (a critical point or a positive local minimum).
      ComponentState state;
      if (u >= nv) {
        const CriticalPoint& cp = cps[u - nv];
        state.degree = cp.degree;
        state.members = {cp.id};
        state.node = add_node(0.0, cp.degree, state.members, true);
        tree.leaf_of_cp[cp.id] = state.node;
      } else {
        state.node = add_node(value[u], 0, {}, true);
      }
      comp[u] = std::move(state);
      continue;
    }

    if (neighbor_roots.size() == 1) {
      parent[u] = neighbor_roots[0];
      continue;
    }

    // Merge event at value[u].
    std::sort(neighbor_roots.begin(), neighbor_roots.end(),
              [&](int a, int b) { return comp[a].node < comp[b].node; });
    int degree = 0;
    std::vector<int> members;
    for (int r : neighbor_roots) {
      degree += comp[r].degree;
      members.insert(members.end(), comp[r].members.begin(), comp[r].members.end());
    }
    std::sort(members.begin(), members.end());
    const int node = add_node(value[u], degree, members, false);
    for (int r : neighbor_roots) {
      tree.nodes[comp[r].node].parent = node;
      parent[r] = u;
    }
    comp[u] = ComponentState{node, degree, std::move(members)};
  }

  for (int i = 0; i < total; ++i) {
    if (find(i) == i && comp[i].node >= 0) tree.roots.push_back(comp[i].node);
  }
  std::sort(tree.roots.begin(), tree.roots.end());
  return tree;
}

Robustness classic_robustness(const AugmentedMergeTree& tree, int cp_id) {
  auto it = tree.leaf_of_cp.find(cp_id);
  if (it == tree.leaf_of_cp.end()) {
    throw std::invalid_argument("classic_robustness: unknown critical point id " +
                                std::to_string(cp_id));
  }
  for (int n = it->second; n >= 0; n = tree.nodes[n].parent) {
    if (tree.nodes[n].degree_sum == 0 && !tree.nodes[n].member_cps.empty()) {
      return Robustness::finite(tree.nodes[n].birth);
    }
  }
  return Robustness::unbounded_value();
}

Robustness merge_value(const AugmentedMergeTree& tree, int cp_a, int cp_b) {
  auto ita = tree.leaf_of_cp.find(cp_a);
  auto itb = tree.leaf_of_cp.find(cp_b);
  if (ita == tree.leaf_of_cp.end() || itb == tree.leaf_of_cp.end()) {
    throw std::invalid_argument("merge_value: unknown critical point id");
  }
  std::vector<char> on_path(tree.nodes.size(), 0);
  for (int n = ita->second; n >= 0; n = tree.nodes[n].parent) on_path[n] = 1;
  for (int n = itb->second; n >= 0; n = tree.nodes[n].parent) {
    if (on_path[n]) return Robustness::finite(tree.nodes[n].birth);
  }
  return Robustness::unbounded_value();
}

std::string merge_tree_to_json(const AugmentedMergeTree& tree) {
  nlohmann::json j;
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (const MergeTreeNode& n : tree.nodes) {
    nlohmann::json nj;
    nj["id"] = n.id;
    nj["birth"] = n.birth;
    nj["degree"] = n.degree_sum;
    nj["parent"] = n.parent;
    nj["members"] = n.member_cps;
    nj["leaf"] = n.is_leaf;
    nodes.push_back(std::move(nj));
  }
  j["roots"] = tree.roots;
  return j.dump();
}

}  // namespace vfr
