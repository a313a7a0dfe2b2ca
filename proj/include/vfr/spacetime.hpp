#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "vfr/field.hpp"

namespace vfr {

/// Spacetime vertex id: frame * vertices_per_frame + vertex.
using SpacetimeId = std::int64_t;

struct SpacetimePoint {
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
};

/// One tetrahedron of the prism split, identified by four spacetime vertex
/// ids spanning two consecutive frames. Oriented to positive volume.
struct SpacetimeTet {
  std::array<SpacetimeId, 4> gids;
  int prism = 0;  // triangle index * interval count offset, see builder
  int local = 0;  // 0..2 within the prism
};

/// Conforming tetrahedralization of mesh x time. Each triangle-interval
/// prism splits into 3 tets by the staircase rule keyed on global vertex
/// ids: every vertical quad over edge (u,v) with u < v takes the diagonal
/// from u at the lower frame to v at the upper frame, so neighboring prisms
/// agree on shared faces.
struct SpacetimeMesh {
  const TimeVaryingField* field = nullptr;
  int vertices_per_frame = 0;
  std::vector<SpacetimeTet> tets;

  int frame_of(SpacetimeId gid) const { return static_cast<int>(gid / vertices_per_frame); }
  int vertex_of(SpacetimeId gid) const { return static_cast<int>(gid % vertices_per_frame); }
  SpacetimePoint point(SpacetimeId gid) const;
  Vec2 value(SpacetimeId gid) const;
  double tet_volume(const SpacetimeTet& tet) const;
};

/// Requires at least 2 frames.
SpacetimeMesh build_spacetime_mesh(const TimeVaryingField& field);

}  // namespace vfr
