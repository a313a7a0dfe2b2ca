#include "vfr/spacetime.hpp"

#include <algorithm>
#include <stdexcept>

namespace vfr {

SpacetimePoint SpacetimeMesh::point(SpacetimeId gid) const {
  const Vec2 p = field->mesh.vertices[vertex_of(gid)];
  return {p.x, p.y, field->frames[frame_of(gid)].time};
}

Vec2 SpacetimeMesh::value(SpacetimeId gid) const {
  return field->frames[frame_of(gid)].vectors[vertex_of(gid)];
}

double SpacetimeMesh::tet_volume(const SpacetimeTet& tet) const {
  const SpacetimePoint a = point(tet.gids[0]);
  const SpacetimePoint b = point(tet.gids[1]);
  const SpacetimePoint c = point(tet.gids[2]);
  const SpacetimePoint d = point(tet.gids[3]);
  const double ux = b.x - a.x, uy = b.y - a.y, ut = b.t - a.t;
  const double vx = c.x - a.x, vy = c.y - a.y, vt = c.t - a.t;
  const double wx = d.x - a.x, wy = d.y - a.y, wt = d.t - a.t;
  const double det =
      ux * (vy * wt - vt * wy) - uy * (vx * wt - vt * wx) + ut * (vx * wy - vy * wx);
  return det / 6.0;
}

SpacetimeMesh build_spacetime_mesh(const TimeVaryingField& field) {
  if (field.frame_count() < 2) {
    throw std::invalid_argument("build_spacetime_mesh: need at least 2 frames");
  }
  SpacetimeMesh st;
  st.field = &field;
  st.vertices_per_frame = field.mesh.vertex_count();

  const int intervals = field.frame_count() - 1;
  const int nt = field.mesh.triangle_count();
  st.tets.reserve(static_cast<size_t>(intervals) * nt * 3);

  for (int k = 0; k < intervals; ++k) {
    const SpacetimeId lo = static_cast<SpacetimeId>(k) * st.vertices_per_frame;
    const SpacetimeId hi = lo + st.vertices_per_frame;
    for (int t = 0; t < nt; ++t) {
      std::array<int, 3> p = field.mesh.triangles[t];
      std::sort(p.begin(), p.end());
      const SpacetimeId b0 = lo + p[0], b1 = lo + p[1], b2 = lo + p[2];
      const SpacetimeId t0 = hi + p[0], t1 = hi + p[1], t2 = hi + p[2];
      const std::array<std::array<SpacetimeId, 4>, 3> split{
          {{b0, b1, b2, t2}, {b0, b1, t1, t2}, {b0, t0, t1, t2}}};
      for (int local = 0; local < 3; ++local) {
        SpacetimeTet tet{split[local], k * nt + t, local};
        if (st.tet_volume(tet) < 0.0) std::swap(tet.gids[0], tet.gids[1]);
        st.tets.push_back(tet);
      }
    }
  }
  return st;
}

}  // namespace vfr
