#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "vfr/merge_tree.hpp"

namespace vfr {

/// Ball neighborhood at sampling level i of N: radius L*(i+1)/N around a
/// critical point.
struct NeighborhoodSpec {
  Vec2 center;
  double radius = 0.0;
  int level = 0;
  int total_levels = 1;

  static NeighborhoodSpec at_level(Vec2 center, double domain_diameter, int level,
                                   int total_levels);
};

/// Ball-restricted subdomain: the triangles fully inside the ball plus the
/// force-included triangle of every critical point whose position lies in the
/// ball, reduced to the connected component containing the center. Critical
/// points keep their full-domain ids and degrees; triangle indices are
/// remapped to the sub-mesh.
struct SubDomain {
  TriangleMesh mesh;
  std::vector<int> vertex_to_parent;
  std::vector<int> triangle_to_parent;
  std::vector<double> f0;
  std::vector<CriticalPoint> cps;
  int center_cp = -1;  // index into cps
};

SubDomain restrict_to_ball(const TriangleMesh& mesh, const FieldFrame& frame,
                           std::span<const CriticalPoint> cps, const NeighborhoodSpec& spec);

/// Classic robustness of cps[cp_index] on the ball-restricted subdomain.
Robustness robustness_at_radius(const TriangleMesh& mesh, const FieldFrame& frame,
                                std::span<const CriticalPoint> cps, int cp_index, double radius);

/// Radii just above each distance from the center to every other critical
/// point (offset 1e-6 * L), plus the domain diameter L. Sorted, deduplicated.
/// These are exactly the radii where the profile can change value.
std::vector<double> partner_breakpoints(std::span<const CriticalPoint> cps, int cp_index,
                                        double domain_diameter);

struct ProfileLevel {
  double radius = 0.0;
  Robustness value;
};

/// Step function R_x over radii with its minimum. `levels` is ascending in
/// radius; between recorded radii the function holds its last value, and
/// below the first it is unbounded.
struct RobustnessProfile {
  int frame_index = 0;
  int cp_id = 0;
  std::vector<ProfileLevel> levels;
  Robustness min_value;

  Robustness value_at(double radius) const;
  int change_count() const;
};

/// N-level profile sampled at radii L*(i+1)/N. Each level is evaluated at the
/// largest partner breakpoint not exceeding the level radius, so the sampled
/// profile is a restriction of the oracle step function and changes only when
/// the ball admits another critical point.
RobustnessProfile multilevel_robustness(const TriangleMesh& mesh, const FieldFrame& frame,
                                        std::span<const CriticalPoint> cps, int cp_index, int N);

/// Exact profile: one level per partner breakpoint. O(n) tree builds, the
/// ground truth the sampled profile restricts.
RobustnessProfile oracle_profile(const TriangleMesh& mesh, const FieldFrame& frame,
                                 std::span<const CriticalPoint> cps, int cp_index);

struct TaskTiming {
  int task_id = 0;
  int frame_index = 0;
  int cp_id = 0;
  int level = 0;
  double seconds = 0.0;
  bool failed = false;
};

struct TaskFarmResult {
  std::vector<RobustnessProfile> profiles;  // ordered by (frame, cp)
  std::vector<TaskTiming> timings;          // ordered by task id = (frame, cp, level)
};

/// One independent task per (critical point, level); n*N tasks per frame.
/// Results are identical to the serial run for any worker count. A task that
/// throws is retried once, then reported failed.
TaskFarmResult run_task_farm(const TimeVaryingField& field,
                             const std::vector<std::vector<CriticalPoint>>& per_frame_cps, int N,
                             int workers, bool use_oracle = false);

void write_robustness_csv(const std::filesystem::path& path,
                          std::span<const RobustnessProfile> profiles);
std::vector<RobustnessProfile> read_robustness_csv(const std::filesystem::path& path);
void write_timing_csv(const std::filesystem::path& path, std::span<const TaskTiming> timings);

}  // namespace vfr
