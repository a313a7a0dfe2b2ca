#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "vfr/multilevel.hpp"
#include "vfr/spacetime.hpp"

namespace vfr {

struct TrajectoryNode {
  int index = 0;  // parameterization order, not time
  double x = 0.0;
  double y = 0.0;
  double t = 0.0;
  std::optional<int> slice;    // frame id when the node lies in a time slice
  std::optional<int> degree;   // from the matched slice critical point
  std::optional<Robustness> min_robustness;
};

/// Where a trajectory came from: the tracker emits originals; segmentation
/// emits pieces carrying the source id and the covered node index ranges.
struct Provenance {
  int source = -1;
  std::vector<std::array<int, 2>> ranges;
  bool original() const { return source < 0; }
};

/// Spacetime polyline of critical points. Consecutive nodes share a tet face
/// (or a segmentation bridge); time along the polyline need not be monotone.
struct Trajectory {
  int id = 0;
  Provenance provenance;
  std::vector<TrajectoryNode> nodes;
};

/// Extracts the zero set of the spacetime PL field as polylines: per tet the
/// linear system is solved via face-zero tests (shared faces are keyed on
/// sorted spacetime ids, so neighboring tets agree bitwise), segments are
/// stitched by exact face-key identity, and junctions split branches into
/// separate trajectories. Output is deterministic for any worker count.
std::vector<Trajectory> extract_trajectories(const SpacetimeMesh& st, int workers = 1);

/// Matches each slice node to its frame critical point (nearest within
/// 1e-6 * L) and annotates degree and minimum multilevel robustness; interior
/// nodes inherit from the nearest annotated slice node along the polyline.
/// per_frame_minR may be empty to annotate degrees only; otherwise it is
/// indexed [frame][cp_id].
void slice_annotate(Trajectory& traj, const std::vector<std::vector<CriticalPoint>>& per_frame_cps,
                    const std::vector<std::vector<Robustness>>& per_frame_minR,
                    double domain_diameter);

void write_trajectories_json(const std::filesystem::path& path,
                             const std::vector<Trajectory>& trajectories);
std::vector<Trajectory> read_trajectories_json(const std::filesystem::path& path);

}  // namespace vfr
