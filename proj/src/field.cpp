#include "vfr/field.hpp"

#include <cmath>
#include <string>

#include "vfr/errors.hpp"

namespace vfr {

void TimeVaryingField::validate() const {
  if (frames.empty()) throw DataError("field: no frames");
  for (size_t i = 0; i < frames.size(); ++i) {
    const FieldFrame& f = frames[i];
    if (f.frame_index != static_cast<int>(i)) {
      throw DataError("field: frame_index not contiguous at position " + std::to_string(i));
    }
    if (i > 0 && !(f.time > frames[i - 1].time)) {
      throw DataError("field: frame times not strictly increasing at frame " + std::to_string(i));
    }
    if (f.vectors.size() != mesh.vertices.size()) {
      throw DataError("field: frame " + std::to_string(i) + " has " +
                      std::to_string(f.vectors.size()) + " vectors for " +
                      std::to_string(mesh.vertices.size()) + " vertices");
    }
    for (const Vec2& v : f.vectors) {
      if (!std::isfinite(v.x) || !std::isfinite(v.y)) {
        throw DataError("field: non-finite vector in frame " + std::to_string(i));
      }
    }
    for (const auto& [name, values] : f.scalars) {
      if (values.size() != mesh.vertices.size()) {
        throw DataError("field: scalar channel '" + name + "' in frame " + std::to_string(i) +
                        " has wrong length");
      }
      for (double s : values) {
        if (!std::isfinite(s)) {
          throw DataError("field: non-finite value in channel '" + name + "', frame " +
                          std::to_string(i));
        }
      }
    }
  }
}

std::vector<double> magnitude_field(const FieldFrame& frame) {
  std::vector<double> out(frame.vectors.size());
  for (size_t i = 0; i < frame.vectors.size(); ++i) out[i] = norm(frame.vectors[i]);
  return out;
}

Vec2 interpolate(const FieldFrame& frame, const TriangleMesh& mesh, const MeshLocator& locator,
                 Vec2 p) {
  auto hit = locator.locate(p);
  if (!hit) throw DataError("point outside mesh");
  const auto& [t, w] = *hit;
  const auto& tri = mesh.triangles[t];
  Vec2 out;
  for (int k = 0; k < 3; ++k) out += frame.vectors[tri[k]] * w[k];
  return out;
}

}  // namespace vfr
