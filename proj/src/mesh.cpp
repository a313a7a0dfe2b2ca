#include "vfr/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "vfr/errors.hpp"

namespace vfr {

namespace {

struct DisjointSet {
  std::vector<int> parent;
  explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int i) {
    while (i != parent[i]) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

TriangleMesh TriangleMesh::create(std::vector<Vec2> vertices,
                                  std::vector<std::array<int, 3>> triangles) {
  TriangleMesh mesh;
  mesh.vertices = std::move(vertices);
  mesh.triangles = std::move(triangles);
  mesh.validate();
  return mesh;
}

double TriangleMesh::signed_area(int t) const {
  const Vec2 a = tri_vertex(t, 0);
  const Vec2 b = tri_vertex(t, 1);
  const Vec2 c = tri_vertex(t, 2);
  return 0.5 * cross(b - a, c - a);
}

BBox TriangleMesh::bounds() const {
  BBox box{vertices.front(), vertices.front()};
  for (const Vec2& v : vertices) box.expand(v);
  return box;
}

std::array<double, 3> TriangleMesh::barycentric(int t, Vec2 p) const {
  const Vec2 a = tri_vertex(t, 0);
  const Vec2 b = tri_vertex(t, 1);
  const Vec2 c = tri_vertex(t, 2);
  const double s = cross(b - a, c - a);
  const double wa = cross(b - p, c - p) / s;
  const double wb = cross(c - p, a - p) / s;
  return {wa, wb, 1.0 - wa - wb};
}

std::vector<std::pair<int, int>> TriangleMesh::unique_edges() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(triangles.size() * 3);
  for (const auto& tri : triangles) {
    for (int k = 0; k < 3; ++k) {
      int u = tri[k];
      int v = tri[(k + 1) % 3];
      edges.emplace_back(std::min(u, v), std::max(u, v));
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return edges;
}

void TriangleMesh::validate() {
  if (vertices.empty()) throw DataError("mesh: no vertices");
  if (triangles.empty()) throw DataError("mesh: no triangles");

  BBox box = bounds();
  diameter = box.diagonal();
  if (!(diameter > 0.0)) throw DataError("mesh: domain diameter is zero");
  const double area_threshold = 1e-14 * diameter * diameter;

  const int nv = vertex_count();
  for (size_t t = 0; t < triangles.size(); ++t) {
    auto& tri = triangles[t];
    for (int idx : tri) {
      if (idx < 0 || idx >= nv) {
        throw DataError("mesh: triangle " + std::to_string(t) + " references vertex " +
                        std::to_string(idx) + " outside [0," + std::to_string(nv) + ")");
      }
    }
    if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2]) {
      throw DataError("mesh: triangle " + std::to_string(t) + " repeats a vertex");
    }
    double a = signed_area(static_cast<int>(t));
    if (a < 0.0) {
      std::swap(tri[1], tri[2]);
      a = -a;
    }
    if (a <= area_threshold) {
      throw DataError("mesh: triangle " + std::to_string(t) + " is degenerate (area " +
                      std::to_string(a) + ")");
    }
  }

  DisjointSet ds(nv);
  for (const auto& tri : triangles) {
    ds.unite(tri[0], tri[1]);
    ds.unite(tri[1], tri[2]);
  }
  const int root = ds.find(0);
  for (int v = 0; v < nv; ++v) {
    if (ds.find(v) != root) {
      throw DataError("mesh: edge graph is disconnected (vertex " + std::to_string(v) +
                      " unreachable from vertex 0)");
    }
  }
}

MeshLocator::MeshLocator(const TriangleMesh& mesh) : mesh_(&mesh) {
  box_ = mesh.bounds();
  const int target = std::max(1, static_cast<int>(std::sqrt(mesh.triangle_count())));
  nx_ = target;
  ny_ = target;
  cell_w_ = std::max(box_.width() / nx_, 1e-300);
  cell_h_ = std::max(box_.height() / ny_, 1e-300);
  cells_.resize(static_cast<size_t>(nx_) * ny_);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    BBox tb{mesh.tri_vertex(t, 0), mesh.tri_vertex(t, 0)};
    tb.expand(mesh.tri_vertex(t, 1));
    tb.expand(mesh.tri_vertex(t, 2));
    const int x0 = std::clamp(static_cast<int>((tb.lo.x - box_.lo.x) / cell_w_), 0, nx_ - 1);
    const int x1 = std::clamp(static_cast<int>((tb.hi.x - box_.lo.x) / cell_w_), 0, nx_ - 1);
    const int y0 = std::clamp(static_cast<int>((tb.lo.y - box_.lo.y) / cell_h_), 0, ny_ - 1);
    const int y1 = std::clamp(static_cast<int>((tb.hi.y - box_.lo.y) / cell_h_), 0, ny_ - 1);
    for (int gy = y0; gy <= y1; ++gy) {
      for (int gx = x0; gx <= x1; ++gx) {
        cells_[static_cast<size_t>(gy) * nx_ + gx].push_back(t);
      }
    }
  }
}

std::optional<std::pair<int, std::array<double, 3>>> MeshLocator::locate(Vec2 p) const {
  const int gx = std::clamp(static_cast<int>((p.x - box_.lo.x) / cell_w_), 0, nx_ - 1);
  const int gy = std::clamp(static_cast<int>((p.y - box_.lo.y) / cell_h_), 0, ny_ - 1);
  for (int t : cells_[static_cast<size_t>(gy) * nx_ + gx]) {
    const auto w = mesh_->barycentric(t, p);
    if (w[0] >= -kBarycentricTol && w[1] >= -kBarycentricTol && w[2] >= -kBarycentricTol) {
      return std::make_pair(t, w);
    }
  }
  return std::nullopt;
}

}  // namespace vfr
