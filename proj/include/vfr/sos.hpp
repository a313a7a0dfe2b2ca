#pragma once

#include <array>
#include <cstdint>

#include "vfr/geometry.hpp"

namespace vfr {

/// Sign of cross(fi, fj) under a symbolic perturbation of every vector
/// component. Vertex k's value is perturbed to (fi.x + e(2k), fi.y + e(2k+1))
/// where e(0) >> e(1) >> ... are positive infinitesimals ordered so that any
/// single e(m) dominates every product of later ones. The returned sign is
/// never zero and is antisymmetric in its arguments, which makes zero-locus
/// membership decisions consistent between neighboring cells: a zero sitting
/// exactly on a shared edge or vertex is claimed by exactly one cell.
int sign_cross(std::int64_t gi, Vec2 fi, std::int64_t gj, Vec2 fj);

struct FaceZero {
  bool claimed = false;
  /// Barycentric coordinates of the zero, aligned with the input vertex
  /// order. Clamped to [0,1], sum 1.
  std::array<double, 3> bary{0.0, 0.0, 0.0};
  /// Common orientation sign of the three perturbed cross products. When the
  /// input order is counterclockwise in the domain this is the Poincare index
  /// of the zero.
  int orientation = 0;
};

/// Tests whether the linear interpolant of `values` over a (spatial or
/// spacetime) triangular face vanishes inside the face, resolving all
/// degenerate configurations with sign_cross. Results depend only on the
/// relative order of the ids, so per-frame extraction and spacetime slice
/// faces agree exactly.
FaceZero face_zero(const std::array<std::int64_t, 3>& ids, const std::array<Vec2, 3>& values);

}  // namespace vfr
