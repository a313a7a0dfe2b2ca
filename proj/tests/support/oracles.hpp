#pragma once

// Independent oracles used by the tests: brute-force constructions that
// stand apart from the library's implementation paths.

#include <functional>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "vfr/critical_points.hpp"
#include "vfr/field.hpp"

namespace vfr::testing {

struct GridOracleResult {
  // Per input critical point, the sublevel threshold at which its grid
  // component first reaches degree zero (infinity = never).
  std::vector<double> robustness;
  // Threshold at which two critical points' grid components merge, keyed by
  // (i, j) with i < j over input indices.
  std::map<std::pair<int, int>, double> merge_values;
};

/// Dense-grid flood-fill oracle: samples |f| of the PL field on an n x n
/// grid over the mesh bounds, unions 8-connected nodes in ascending value
/// order, and tracks per-component degree sums seeded at the critical
/// points' nearest grid nodes.
GridOracleResult grid_robustness_oracle(const TriangleMesh& mesh, const FieldFrame& frame,
                                        std::span<const CriticalPoint> cps, int grid_n);

/// Brute-force winding number of an analytic field along a circle.
int winding_oracle(const std::function<Vec2(Vec2)>& field, Vec2 center, double radius,
                   int samples = 360);

/// Cluster count by direct Gaussian density evaluation on a fine grid:
/// 1 + number of strict interior minima (plateaus collapsed).
int kde_mode_oracle(std::span<const double> values, double sigma, int fine_n = 8192);

/// Max |f0(u) - f0(v)| / |u - v| over mesh edges; the Lipschitz scale used
/// in grid-oracle tolerances.
double max_edge_gradient(const TriangleMesh& mesh, std::span<const double> f0);

std::vector<Vec2> circle_loop(Vec2 center, double radius, int points = 256);

}  // namespace vfr::testing
