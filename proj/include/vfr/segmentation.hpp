#pragma once

#include <span>
#include <vector>

#include "vfr/tracking.hpp"

namespace vfr {

struct SegmentationConfig {
  double k = 0.5;       // logistic steepness
  double sigma = 0.2;   // Gaussian KDE bandwidth
  int grid_size = 512;  // KDE evaluation grid over [0,1]
  int bridge_gap = 2;   // max removed annotated nodes a bridge may span

  void validate() const;
};

/// Logistic transform 2 / (1 + exp(-k * minR)) - 1, mapping [0, inf] onto
/// [0, 1]; unbounded maps to exactly 1.
double logistic_stability(Robustness min_robustness, double k);

/// Clusters values in [0,1] by Gaussian kernel density: the density is
/// evaluated on a uniform grid, cluster boundaries sit at strict local minima
/// between maxima (plateaus collapse to their leftmost point), and labels
/// number the intervals in ascending position.
std::vector<int> kde_cluster(std::span<const double> values, const SegmentationConfig& config);

/// Splits a trajectory into maximal runs of nodes sharing a robustness
/// cluster, reconnecting same-label runs separated by at most bridge_gap
/// annotated nodes. Pieces carry {source id, node ranges} provenance; an
/// unannotated trajectory is returned unchanged with a warning.
std::vector<Trajectory> segment_trajectory(const Trajectory& traj,
                                           const SegmentationConfig& config);

}  // namespace vfr
