#pragma once

#include <map>
#include <string>
#include <vector>

#include "vfr/geometry.hpp"
#include "vfr/mesh.hpp"

namespace vfr {

/// One time step: a 2D vector per mesh vertex plus optional named scalar
/// channels (e.g. wind speed, pressure).
struct FieldFrame {
  int frame_index = 0;
  double time = 0.0;
  std::vector<Vec2> vectors;
  std::map<std::string, std::vector<double>> scalars;
};

struct TimeVaryingField {
  TriangleMesh mesh;
  std::vector<FieldFrame> frames;

  int frame_count() const { return static_cast<int>(frames.size()); }
  double time_span() const {
    return frames.empty() ? 0.0 : frames.back().time - frames.front().time;
  }
  void validate() const;
};

/// Per-vertex Euclidean norm of the frame's vectors.
std::vector<double> magnitude_field(const FieldFrame& frame);

/// Barycentric-linear interpolation of the frame's vectors at p.
/// Throws DataError("point outside mesh") when p is not in any triangle.
Vec2 interpolate(const FieldFrame& frame, const TriangleMesh& mesh, const MeshLocator& locator,
                 Vec2 p);

}  // namespace vfr
