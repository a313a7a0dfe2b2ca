#include "vfr/sos.hpp"

#include <algorithm>
#include <cmath>

namespace vfr {

namespace {

inline int float_sign(double v) { return v > 0.0 ? 1 : (v < 0.0 ? -1 : 0); }

// gi < gj. Terms of the perturbed cross product in decreasing magnitude:
// the unperturbed value, then the four single-epsilon terms ordered by
// epsilon index, then the dominant pair term e(2i+1)*e(2j) with coefficient
// -1, which guarantees a nonzero answer.
int sign_cross_ordered(Vec2 fi, Vec2 fj) {
  if (int s = float_sign(cross(fi, fj)); s != 0) return s;
  if (int s = float_sign(fj.y); s != 0) return s;
  if (int s = float_sign(-fj.x); s != 0) return s;
  if (int s = float_sign(-fi.y); s != 0) return s;
  if (int s = float_sign(fi.x); s != 0) return s;
  return -1;
}

}  // namespace

int sign_cross(std::int64_t gi, Vec2 fi, std::int64_t gj, Vec2 fj) {
  if (gi < gj) return sign_cross_ordered(fi, fj);
  return -sign_cross_ordered(fj, fi);
}

FaceZero face_zero(const std::array<std::int64_t, 3>& ids, const std::array<Vec2, 3>& values) {
  FaceZero out;
  const int s01 = sign_cross(ids[0], values[0], ids[1], values[1]);
  const int s12 = sign_cross(ids[1], values[1], ids[2], values[2]);
  const int s20 = sign_cross(ids[2], values[2], ids[0], values[0]);
  if (s01 != s12 || s12 != s20) return out;

  out.claimed = true;
  out.orientation = s01;

  const double c01 = cross(values[0], values[1]);
  const double c12 = cross(values[1], values[2]);
  const double c20 = cross(values[2], values[0]);
  const double total = (c01 + c12) + c20;
  if (total == 0.0) {
    // Image triangle degenerate in float arithmetic; any interior point
    // represents the symbolic zero.
    out.bary = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
    return out;
  }
  std::array<double, 3> w{c12 / total, c20 / total, c01 / total};
  double sum = 0.0;
  for (double& v : w) {
    v = std::clamp(v, 0.0, 1.0);
    sum += v;
  }
  for (double& v : w) v /= sum;
  out.bary = w;
  return out;
}

}  // namespace vfr
