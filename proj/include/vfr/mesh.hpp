#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "vfr/geometry.hpp"

namespace vfr {

/// Planar triangle mesh. `validate()` normalizes every triangle to
/// counterclockwise order, checks index ranges, degeneracy, and edge-graph
/// connectivity, and caches the domain diameter (bounding-box diagonal).
/// Instances are immutable after validation and safe to share across threads.
struct TriangleMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;
  double diameter = 0.0;

  static TriangleMesh create(std::vector<Vec2> vertices, std::vector<std::array<int, 3>> triangles);

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }
  Vec2 tri_vertex(int t, int corner) const { return vertices[triangles[t][corner]]; }
  double signed_area(int t) const;
  BBox bounds() const;

  /// Barycentric coordinates of p with respect to triangle t.
  std::array<double, 3> barycentric(int t, Vec2 p) const;

  /// Undirected edge list as (min,max) vertex pairs, sorted. Deterministic.
  std::vector<std::pair<int, int>> unique_edges() const;

 private:
  void validate();
};

/// Uniform-grid point-location index over a mesh. Built once, queried
/// concurrently.
class MeshLocator {
 public:
  explicit MeshLocator(const TriangleMesh& mesh);

  /// Containing triangle and barycentric coordinates, or nullopt when p is
  /// outside the mesh (barycentric tolerance 1e-12).
  std::optional<std::pair<int, std::array<double, 3>>> locate(Vec2 p) const;

 private:
  const TriangleMesh* mesh_;
  BBox box_;
  int nx_ = 1, ny_ = 1;
  double cell_w_ = 1.0, cell_h_ = 1.0;
  std::vector<std::vector<int>> cells_;
};

inline constexpr double kBarycentricTol = 1e-12;

}  // namespace vfr
