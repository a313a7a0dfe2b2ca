#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "vfr/merge_tree.hpp"
#include "vfr/synth.hpp"

using namespace vfr;
namespace vt = vfr::testing;

namespace {

AugmentedMergeTree tree_of(const vt::RandomField& rf) {
  const auto f0 = magnitude_field(rf.field.frames[0]);
  return build_merge_tree(rf.field.mesh, f0, rf.cps);
}

// Highest ancestor with birth <= level: the component of the sublevel set at
// that level containing the leaf.
const MergeTreeNode& component_at(const AugmentedMergeTree& tree, int leaf, double level) {
  int n = leaf;
  while (tree.nodes[n].parent >= 0 && tree.nodes[tree.nodes[n].parent].birth <= level) {
    n = tree.nodes[n].parent;
  }
  return tree.nodes[n];
}

}  // namespace

TEST_CASE("hand-built tree: partner pairs get their merge values") {
  // Leaves x1..x4 (degrees +1,-1,+1,-1); {x1,x2} merge at r1=0.2 (degree 0),
  // {x3,x4} at r3=0.5, root at 0.8.
  AugmentedMergeTree tree;
  auto add = [&tree](double birth, int degree, std::vector<int> members, int parent, bool leaf) {
    MergeTreeNode n;
    n.id = static_cast<int>(tree.nodes.size());
    n.birth = birth;
    n.degree_sum = degree;
    n.member_cps = std::move(members);
    n.parent = parent;
    n.is_leaf = leaf;
    tree.nodes.push_back(n);
    return n.id;
  };
  const int n12 = add(0.2, 0, {0, 1}, -1, false);
  const int n34 = add(0.5, 0, {2, 3}, -1, false);
  const int root = add(0.8, 0, {0, 1, 2, 3}, -1, false);
  tree.nodes[n12].parent = root;
  tree.nodes[n34].parent = root;
  tree.leaf_of_cp[0] = add(0.0, 1, {0}, n12, true);
  tree.leaf_of_cp[1] = add(0.0, -1, {1}, n12, true);
  tree.leaf_of_cp[2] = add(0.0, 1, {2}, n34, true);
  tree.leaf_of_cp[3] = add(0.0, -1, {3}, n34, true);
  tree.roots = {root};

  CHECK(classic_robustness(tree, 0).value == 0.2);
  CHECK(classic_robustness(tree, 1).value == 0.2);
  CHECK(classic_robustness(tree, 2).value == 0.5);
  CHECK(classic_robustness(tree, 3).value == 0.5);
  CHECK_THROWS_AS(classic_robustness(tree, 9), std::invalid_argument);
}

TEST_CASE("two-cp field: one zero-degree internal node at the pair merge value") {
  const auto pair = vt::make_pair_field();
  const auto tree = tree_of(pair);

  const Robustness r0 = classic_robustness(tree, 0);
  const Robustness r1 = classic_robustness(tree, 1);
  REQUIRE_FALSE(r0.unbounded());
  CHECK(r0.value == r1.value);
  CHECK(r0.value == merge_value(tree, 0, 1).value);

  // The lowest zero-degree ancestor holds both critical points.
  int n = tree.leaf_of_cp.at(0);
  while (tree.nodes[n].degree_sum != 0) n = tree.nodes[n].parent;
  CHECK(tree.nodes[n].member_cps == std::vector<int>{0, 1});
  CHECK(tree.nodes[n].birth == r0.value);
}

TEST_CASE("lone critical point is unbounded") {
  const std::vector<FlowElement> elements{
      FlowElement::steady(ElementKind::Center, {0.5, 0.5}, 1.0, 0.1)};
  const std::vector<double> times{0.0};
  const auto field = render(elements, grid_mesh(32, 32, {{0, 0}, {1, 1}}), times);
  const auto cps = extract_critical_points(field.frames[0], field.mesh);
  REQUIRE(cps.size() == 1);
  const auto tree = build_merge_tree(field.mesh, magnitude_field(field.frames[0]), cps);
  CHECK(classic_robustness(tree, 0).unbounded());
  // Root degree stays nonzero.
  CHECK(tree.nodes[tree.roots.back()].degree_sum != 0);
}

TEST_CASE("pair robustness matches the grid min-max oracle") {
  const auto pair = vt::make_pair_field(96);
  const auto tree = tree_of(pair);
  const auto f0 = magnitude_field(pair.field.frames[0]);
  const auto oracle =
      vt::grid_robustness_oracle(pair.field.mesh, pair.field.frames[0], pair.cps, 160);
  const double tol = 2.0 * (pair.field.mesh.diameter / 160.0) *
                     vt::max_edge_gradient(pair.field.mesh, f0);
  for (int c = 0; c < 2; ++c) {
    const Robustness r = classic_robustness(tree, c);
    REQUIRE_FALSE(r.unbounded());
    CHECK(std::abs(r.value - oracle.robustness[c]) <= tol);
  }
}

TEST_CASE("merge heights match a dense-grid union-find oracle on a 6-cp field") {
  const auto rf = vt::make_random_field(2024, 4, 8, 64);
  const auto tree = tree_of(rf);
  const auto f0 = magnitude_field(rf.field.frames[0]);
  const auto oracle = vt::grid_robustness_oracle(rf.field.mesh, rf.field.frames[0], rf.cps, 200);
  const double tol =
      2.0 * (rf.field.mesh.diameter / 200.0) * vt::max_edge_gradient(rf.field.mesh, f0);
  for (const auto& [pair, grid_value] : oracle.merge_values) {
    const Robustness tree_value = merge_value(tree, pair.first, pair.second);
    REQUIRE_FALSE(tree_value.unbounded());
    CHECK(std::abs(tree_value.value - grid_value) <= tol);
  }
}

TEST_CASE("structural invariants: monotone heights, degree conservation, leaves") {
  for (unsigned seed : {10u, 11u, 12u, 13u}) {
    const auto rf = vt::make_random_field(seed, 4, 8, 40);
    const auto tree = tree_of(rf);

    std::vector<int> child_degree_sum(tree.nodes.size(), 0);
    std::vector<int> child_count(tree.nodes.size(), 0);
    for (const MergeTreeNode& n : tree.nodes) {
      if (n.parent >= 0) {
        CHECK(tree.nodes[n.parent].birth >= n.birth);
        child_degree_sum[n.parent] += n.degree_sum;
        ++child_count[n.parent];
      }
    }
    for (const MergeTreeNode& n : tree.nodes) {
      if (child_count[n.id] > 0) CHECK(n.degree_sum == child_degree_sum[n.id]);
      if (n.is_leaf) CHECK(n.member_cps.size() <= 1);
    }

    // Each cp in exactly one leaf; root holds all cps.
    CHECK(tree.leaf_of_cp.size() == rf.cps.size());
    int root = tree.leaf_of_cp.at(0);
    while (tree.nodes[root].parent >= 0) root = tree.nodes[root].parent;
    CHECK(tree.nodes[root].member_cps.size() == rf.cps.size());
  }
}

TEST_CASE("group robustness: same lowest zero-degree ancestor, same value") {
  for (unsigned seed : {21u, 22u, 23u}) {
    const auto rf = vt::make_random_field(seed, 4, 8, 40);
    const auto tree = tree_of(rf);
    std::vector<int> anchor(rf.cps.size(), -1);
    for (size_t c = 0; c < rf.cps.size(); ++c) {
      int n = tree.leaf_of_cp.at(static_cast<int>(c));
      while (n >= 0 && tree.nodes[n].degree_sum != 0) n = tree.nodes[n].parent;
      anchor[c] = n;
    }
    for (size_t a = 0; a < rf.cps.size(); ++a) {
      for (size_t b = a + 1; b < rf.cps.size(); ++b) {
        if (anchor[a] >= 0 && anchor[a] == anchor[b]) {
          CHECK(classic_robustness(tree, static_cast<int>(a)) ==
                classic_robustness(tree, static_cast<int>(b)));
        }
      }
    }
  }
}

TEST_CASE("cancellation and degree-preservation surrogates on the tree") {
  for (unsigned seed : {31u, 32u, 33u, 34u}) {
    const auto rf = vt::make_random_field(seed, 4, 8, 40);
    const auto tree = tree_of(rf);
    for (size_t c = 0; c < rf.cps.size(); ++c) {
      const Robustness r = classic_robustness(tree, static_cast<int>(c));
      if (r.unbounded()) continue;
      const int leaf = tree.leaf_of_cp.at(static_cast<int>(c));

      // Below the robustness value the containing component keeps nonzero
      // degree.
      for (double eta : {0.5, 0.1, 0.01}) {
        const double level = r.value * (1.0 - eta);
        CHECK(component_at(tree, leaf, level).degree_sum != 0);
      }

      // Just above it the component has degree zero. Choose eta below the
      // next merge event so the component is exactly the anchor node.
      int anchor = leaf;
      while (tree.nodes[anchor].degree_sum != 0) anchor = tree.nodes[anchor].parent;
      const int above = tree.nodes[anchor].parent;
      const double next_birth =
          above >= 0 ? tree.nodes[above].birth : std::numeric_limits<double>::infinity();
      if (next_birth > r.value) {
        const double level = r.value + 0.5 * std::min(1.0, next_birth - r.value);
        CHECK(component_at(tree, leaf, level).degree_sum == 0);
      }
    }
  }
}

TEST_CASE("merge tree json dump lists nodes and roots") {
  const auto pair = vt::make_pair_field(32);
  const auto tree = tree_of(pair);
  const std::string json = merge_tree_to_json(tree);
  CHECK(json.find("\"nodes\"") != std::string::npos);
  CHECK(json.find("\"roots\"") != std::string::npos);
  CHECK(json.find("\"degree\"") != std::string::npos);
}
