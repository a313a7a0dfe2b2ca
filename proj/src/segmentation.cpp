#include "vfr/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>

namespace vfr {

void SegmentationConfig::validate() const {
  if (!(k > 0.0)) throw std::invalid_argument("segmentation: k must be positive");
  if (!(sigma > 0.0 && sigma <= 1.0)) throw std::invalid_argument("segmentation: sigma in (0,1]");
  if (grid_size < 64) throw std::invalid_argument("segmentation: grid_size must be >= 64");
  if (bridge_gap < 0) throw std::invalid_argument("segmentation: bridge_gap must be >= 0");
}

double logistic_stability(Robustness min_robustness, double k) {
  if (min_robustness.unbounded()) return 1.0;
  return 2.0 / (1.0 + std::exp(-k * min_robustness.value)) - 1.0;
}

std::vector<int> kde_cluster(std::span<const double> values, const SegmentationConfig& config) {
  if (values.empty()) throw std::invalid_argument("kde_cluster: empty values");
  config.validate();

  const int n = config.grid_size;
  std::vector<double> density(n, 0.0);
  const double inv_two_sigma2 = 1.0 / (2.0 * config.sigma * config.sigma);
  for (int i = 0; i < n; ++i) {
    const double g = static_cast<double>(i) / (n - 1);
    double d = 0.0;
    for (double v : values) {
      const double u = g - v;
      d += std::exp(-u * u * inv_two_sigma2);
    }
    density[i] = d;
  }

  // Compress equal-density plateaus to runs; a run strictly below both
  // neighbors is a boundary, represented by its leftmost grid value.
  std::vector<std::pair<int, double>> runs;  // (first grid index, density)
  for (int i = 0; i < n; ++i) {
    if (runs.empty() || density[i] != runs.back().second) runs.emplace_back(i, density[i]);
  }
  std::vector<double> boundaries;
  for (size_t r = 1; r + 1 < runs.size(); ++r) {
    if (runs[r].second < runs[r - 1].second && runs[r].second < runs[r + 1].second) {
      boundaries.push_back(static_cast<double>(runs[r].first) / (n - 1));
    }
  }

  std::vector<int> labels(values.size(), 0);
  for (size_t i = 0; i < values.size(); ++i) {
    int label = 0;
    for (double b : boundaries) {
      if (values[i] >= b) ++label;
    }
    labels[i] = label;
  }
  return labels;
}

namespace {

struct Run {
  int first = 0;  // node index range, inclusive
  int last = 0;
  int label = 0;
  int annotated = 0;
};

}  // namespace

std::vector<Trajectory> segment_trajectory(const Trajectory& traj,
                                           const SegmentationConfig& config) {
  config.validate();

  std::vector<int> annotated_idx;
  std::vector<double> l_values;
  for (const TrajectoryNode& node : traj.nodes) {
    if (node.min_robustness) {
      annotated_idx.push_back(node.index);
      l_values.push_back(logistic_stability(*node.min_robustness, config.k));
    }
  }
  if (annotated_idx.empty()) {
    std::cerr << "warning: trajectory " << traj.id << " has no annotated nodes, not segmented\n";
    return {traj};
  }

  const std::vector<int> cluster = kde_cluster(l_values, config);

  // Only slice nodes participate in clustering; every node takes the label
  // of its nearest annotated node (ties: closer time, then lower index).
  const int n = static_cast<int>(traj.nodes.size());
  std::vector<int> label(n, 0);
  for (int i = 0; i < n; ++i) {
    size_t best = 0;
    for (size_t a = 1; a < annotated_idx.size(); ++a) {
      const int d_new = std::abs(annotated_idx[a] - i);
      const int d_best = std::abs(annotated_idx[best] - i);
      if (d_new < d_best) {
        best = a;
      } else if (d_new == d_best) {
        const double t_new = std::abs(traj.nodes[annotated_idx[a]].t - traj.nodes[i].t);
        const double t_best = std::abs(traj.nodes[annotated_idx[best]].t - traj.nodes[i].t);
        if (t_new < t_best) best = a;
      }
    }
    label[i] = cluster[best];
  }

  std::vector<Run> runs;
  for (int i = 0; i < n; ++i) {
    if (runs.empty() || label[i] != runs.back().label) {
      runs.push_back({i, i, label[i], 0});
    } else {
      runs.back().last = i;
    }
    if (traj.nodes[i].min_robustness) ++runs.back().annotated;
  }

  if (runs.size() == 1) return {traj};

  // Greedy left-to-right bridging: absorb the run after next when it shares
  // the label and the removed run is short enough. Removed runs still come
  // out as their own pieces.
  std::vector<std::vector<size_t>> pieces;
  std::vector<char> consumed(runs.size(), 0);
  for (size_t r = 0; r < runs.size(); ++r) {
    if (consumed[r]) continue;
    std::vector<size_t> piece{r};
    consumed[r] = 1;
    size_t cur = r;
    while (cur + 2 < runs.size() && !consumed[cur + 2] && runs[cur + 2].label == runs[r].label &&
           runs[cur + 1].annotated <= config.bridge_gap) {
      piece.push_back(cur + 2);
      consumed[cur + 2] = 1;
      cur += 2;
    }
    pieces.push_back(std::move(piece));
  }
  std::sort(pieces.begin(), pieces.end(),
            [&](const auto& a, const auto& b) { return runs[a.front()].first < runs[b.front()].first; });

  std::vector<Trajectory> out;
  for (const auto& piece : pieces) {
    Trajectory part;
    part.id = static_cast<int>(out.size());
    part.provenance.source = traj.id;
    for (size_t r : piece) {
      part.provenance.ranges.push_back({runs[r].first, runs[r].last});
      for (int i = runs[r].first; i <= runs[r].last; ++i) {
        TrajectoryNode node = traj.nodes[i];
        node.index = static_cast<int>(part.nodes.size());
        part.nodes.push_back(node);
      }
    }
    out.push_back(std::move(part));
  }
  return out;
}

}  // namespace vfr
