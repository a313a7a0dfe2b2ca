#pragma once

#include <array>
#include <filesystem>
#include <span>
#include <vector>

#include "vfr/field.hpp"

namespace vfr {

/// Isolated zero of the piecewise-linear field, strictly inside `triangle`
/// after symbolic perturbation. degree is the Poincare index, -1 or +1.
struct CriticalPoint {
  int id = 0;  // index within its frame
  int frame_index = 0;
  Vec2 position;
  int triangle = 0;
  int degree = 0;
  std::array<double, 3> barycentric{0.0, 0.0, 0.0};
};

/// One critical point per triangle whose linear interpolant vanishes inside
/// it. Degenerate zeros (on edges/vertices, or with exactly-zero components)
/// are resolved by symbolic perturbation, so each zero is reported exactly
/// once and the output is identical across runs and thread counts. Zeros
/// whose winding degree evaluates to 0 are discarded with a warning.
std::vector<CriticalPoint> extract_critical_points(const FieldFrame& frame,
                                                   const TriangleMesh& mesh);

/// Winding number of the field along the counterclockwise boundary of the
/// critical point's triangle: summed signed angle / 2*pi, rounded. Throws
/// DataError("ill-conditioned degree") if the sum is not within 0.25 rad of
/// an integer multiple of 2*pi.
int winding_degree(const CriticalPoint& cp, const FieldFrame& frame, const TriangleMesh& mesh);

/// Winding number of the field along a simple closed counterclockwise
/// polyline that stays inside the mesh and away from zeros. Equals the sum
/// of the degrees of the enclosed critical points. Throws
/// DataError("degenerate loop") when the loop passes through a zero.
int region_degree(std::span<const Vec2> loop, const FieldFrame& frame, const TriangleMesh& mesh,
                  const MeshLocator& locator);

void write_critical_points_csv(const std::filesystem::path& path,
                               const std::vector<std::vector<CriticalPoint>>& per_frame);
std::vector<std::vector<CriticalPoint>> read_critical_points_csv(const std::filesystem::path& path,
                                                                 const TriangleMesh& mesh);

}  // namespace vfr
