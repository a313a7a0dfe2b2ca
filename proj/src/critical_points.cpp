#include "vfr/critical_points.hpp"

#include <cmath>
#include <iostream>
#include <numbers>
#include <string>

#include "vfr/csv.hpp"
#include "vfr/errors.hpp"
#include "vfr/sos.hpp"

namespace vfr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Signed angle swept by the field moving linearly from a to b in value space.
// Valid only when the segment does not pass through the origin.
double sweep_angle(Vec2 a, Vec2 b) { return std::atan2(cross(a, b), dot(a, b)); }

bool segment_through_origin(Vec2 a, Vec2 b) {
  if ((a.x == 0.0 && a.y == 0.0) || (b.x == 0.0 && b.y == 0.0)) return true;
  return cross(a, b) == 0.0 && dot(a, b) < 0.0;
}

int round_winding(double total, const char* error_message) {
  const double k = total / kTwoPi;
  const double rounded = std::round(k);
  if (std::abs(total - rounded * kTwoPi) > 0.25) throw DataError(error_message);
  return static_cast<int>(rounded);
}

}  // namespace

std::vector<CriticalPoint> extract_critical_points(const FieldFrame& frame,
                                                   const TriangleMesh& mesh) {
  std::vector<CriticalPoint> out;
  int discarded = 0;
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const std::array<std::int64_t, 3> ids{tri[0], tri[1], tri[2]};
    const std::array<Vec2, 3> values{frame.vectors[tri[0]], frame.vectors[tri[1]],
                                     frame.vectors[tri[2]]};
    const FaceZero z = face_zero(ids, values);
    if (!z.claimed) continue;

    CriticalPoint cp;
    cp.id = static_cast<int>(out.size());
    cp.frame_index = frame.frame_index;
    cp.triangle = t;
    cp.barycentric = z.bary;
    cp.position = mesh.tri_vertex(t, 0) * z.bary[0] + mesh.tri_vertex(t, 1) * z.bary[1] +
                  mesh.tri_vertex(t, 2) * z.bary[2];
    try {
      cp.degree = winding_degree(cp, frame, mesh);
    } catch (const DataError&) {
      // Zero sits on the triangle boundary in float arithmetic; the symbolic
      // orientation sign is the degree of the perturbed zero.
      cp.degree = z.orientation;
    }
    if (cp.degree == 0) {
      ++discarded;
      continue;
    }
    out.push_back(cp);
  }
  if (discarded > 0) {
    std::cerr << "warning: frame " << frame.frame_index << ": discarded " << discarded
              << " degree-0 sampling artifact(s)\n";
  }
  return out;
}

int winding_degree(const CriticalPoint& cp, const FieldFrame& frame, const TriangleMesh& mesh) {
  const auto& tri = mesh.triangles[cp.triangle];
  double total = 0.0;
  for (int k = 0; k < 3; ++k) {
    const Vec2 a = frame.vectors[tri[k]];
    const Vec2 b = frame.vectors[tri[(k + 1) % 3]];
    if (segment_through_origin(a, b)) throw DataError("ill-conditioned degree");
    total += sweep_angle(a, b);
  }
  return round_winding(total, "ill-conditioned degree");
}

namespace {

struct LoopWalker {
  const FieldFrame& frame;
  const TriangleMesh& mesh;
  const MeshLocator& locator;

  Vec2 eval(Vec2 p) const {
    const Vec2 v = interpolate(frame, mesh, locator, p);
    if (v.x == 0.0 && v.y == 0.0) throw DataError("degenerate loop");
    return v;
  }

  // Accumulates the swept angle along the straight segment [pa, pb],
  // bisecting until each piece rotates the field by less than pi/2.
  double sweep(Vec2 pa, Vec2 fa, Vec2 pb, Vec2 fb, int depth) const {
    if (!segment_through_origin(fa, fb)) {
      const double a = sweep_angle(fa, fb);
      if (std::abs(a) < std::numbers::pi / 2.0) return a;
    }
    if (depth >= 48) throw DataError("degenerate loop");
    const Vec2 mid{0.5 * (pa.x + pb.x), 0.5 * (pa.y + pb.y)};
    const Vec2 fm = eval(mid);
    return sweep(pa, fa, mid, fm, depth + 1) + sweep(mid, fm, pb, fb, depth + 1);
  }
};

}  // namespace

int region_degree(std::span<const Vec2> loop, const FieldFrame& frame, const TriangleMesh& mesh,
                  const MeshLocator& locator) {
  if (loop.size() < 3) throw DataError("degenerate loop");
  LoopWalker walker{frame, mesh, locator};

  std::vector<Vec2> values(loop.size());
  for (size_t i = 0; i < loop.size(); ++i) values[i] = walker.eval(loop[i]);

  double total = 0.0;
  for (size_t i = 0; i < loop.size(); ++i) {
    const size_t j = (i + 1) % loop.size();
    total += walker.sweep(loop[i], values[i], loop[j], values[j], 0);
  }
  return round_winding(total, "degenerate loop");
}

void write_critical_points_csv(const std::filesystem::path& path,
                               const std::vector<std::vector<CriticalPoint>>& per_frame) {
  std::vector<std::vector<std::string>> rows;
  for (const auto& cps : per_frame) {
    for (const CriticalPoint& cp : cps) {
      rows.push_back({std::to_string(cp.frame_index), std::to_string(cp.id),
                      format_double(cp.position.x), format_double(cp.position.y),
                      std::to_string(cp.triangle), std::to_string(cp.degree)});
    }
  }
  write_csv(path, {"frame", "cp_id", "x", "y", "triangle", "degree"}, rows);
}

std::vector<std::vector<CriticalPoint>> read_critical_points_csv(const std::filesystem::path& path,
                                                                 const TriangleMesh& mesh) {
  const CsvTable table = read_csv(path);
  const std::string where = path.string();
  std::vector<std::vector<CriticalPoint>> per_frame;
  for (const auto& row : table.rows) {
    CriticalPoint cp;
    cp.frame_index = static_cast<int>(parse_long(row[0], where));
    cp.id = static_cast<int>(parse_long(row[1], where));
    cp.position = {parse_double(row[2], where), parse_double(row[3], where)};
    cp.triangle = static_cast<int>(parse_long(row[4], where));
    cp.degree = static_cast<int>(parse_long(row[5], where));
    if (cp.frame_index < 0) throw DataError(where + ": negative frame index");
    if (cp.triangle < 0 || cp.triangle >= mesh.triangle_count()) {
      throw DataError(where + ": triangle index out of range");
    }
    cp.barycentric = mesh.barycentric(cp.triangle, cp.position);
    if (static_cast<int>(per_frame.size()) <= cp.frame_index) {
      per_frame.resize(cp.frame_index + 1);
    }
    if (cp.id != static_cast<int>(per_frame[cp.frame_index].size())) {
      throw DataError(where + ": cp_id not contiguous within frame " +
                      std::to_string(cp.frame_index));
    }
    per_frame[cp.frame_index].push_back(cp);
  }
  return per_frame;
}

}  // namespace vfr
