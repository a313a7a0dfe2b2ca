#pragma once

#include <span>
#include <string>
#include <vector>

#include "vfr/segmentation.hpp"

namespace vfr {

struct TrajectoryScore {
  int id = 0;
  double stability = 0.0;   // b in [0,1]
  double avg_degree = 0.0;  // d in [-1,1]
  double t_span = 0.0;      // lifespan, max - min node time
  int length = 0;           // annotated node count
};

/// Stability b = (mean logistic minR over annotated nodes) * (t_span / T).
/// A trajectory without annotated nodes scores 0 with a warning.
TrajectoryScore score_trajectory(const Trajectory& traj, double k, double total_span);

std::vector<TrajectoryScore> score_trajectories(std::span<const Trajectory> trajectories, double k,
                                                double total_span);

/// Keeps trajectories with b >= stability_threshold and d >= degree_threshold
/// (inclusive, AND).
std::vector<Trajectory> filter_trajectories(std::span<const Trajectory> trajectories,
                                            std::span<const TrajectoryScore> scores,
                                            double stability_threshold, double degree_threshold);

/// Maximum of a scalar channel over the mesh vertices within `radius` of
/// `center`. Throws DataError on an unknown channel or empty region.
double regional_max(const FieldFrame& frame, const TriangleMesh& mesh, const std::string& channel,
                    Vec2 center, double radius);

/// Pearson correlation. Throws DataError("degenerate series") on zero
/// variance and on series shorter than 3.
double pearson(std::span<const double> a, std::span<const double> b);

struct SweepCell {
  double k = 0.0;
  double sigma = 0.0;
  int count = 0;
};

/// Segment + score + filter for every (k, sigma) pair; records surviving
/// trajectory counts. Cells are independent and run in parallel.
std::vector<SweepCell> sweep(std::span<const Trajectory> trajectories,
                             const SegmentationConfig& base, std::span<const double> k_values,
                             std::span<const double> sigma_values, double stability_threshold,
                             double degree_threshold, double total_span, int workers = 1);

struct CorrelationRow {
  int trajectory_id = 0;
  std::string channel;
  double pearson = 0.0;
  int n_pairs = 0;
};

/// Pearson correlation between a trajectory's finite minR values at annotated
/// nodes and the regional max of a scalar channel around each node (radius in
/// domain units). Unbounded nodes are excluded pairwise.
CorrelationRow correlate_trajectory(const Trajectory& traj, const TimeVaryingField& field,
                                    const std::string& channel, double radius);

}  // namespace vfr
