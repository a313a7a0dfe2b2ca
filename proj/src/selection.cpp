#include "vfr/selection.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "vfr/errors.hpp"
#include "vfr/task_pool.hpp"

namespace vfr {

TrajectoryScore score_trajectory(const Trajectory& traj, double k, double total_span) {
  if (!(total_span > 0.0)) throw std::invalid_argument("score_trajectory: total_span must be > 0");
  TrajectoryScore score;
  score.id = traj.id;

  double l_sum = 0.0;
  double degree_sum = 0.0;
  int degree_count = 0;
  for (const TrajectoryNode& node : traj.nodes) {
    if (node.min_robustness) {
      l_sum += logistic_stability(*node.min_robustness, k);
      ++score.length;
    }
    if (node.degree) {
      degree_sum += *node.degree;
      ++degree_count;
    }
  }
  if (!traj.nodes.empty()) {
    auto [lo, hi] = std::minmax_element(
        traj.nodes.begin(), traj.nodes.end(),
        [](const TrajectoryNode& a, const TrajectoryNode& b) { return a.t < b.t; });
    score.t_span = hi->t - lo->t;
  }
  if (score.length == 0) {
    std::cerr << "warning: trajectory " << traj.id << " has no annotated nodes, stability 0\n";
    return score;
  }
  score.stability = (l_sum / score.length) * (score.t_span / total_span);
  score.avg_degree = degree_count > 0 ? degree_sum / degree_count : 0.0;
  return score;
}

std::vector<TrajectoryScore> score_trajectories(std::span<const Trajectory> trajectories, double k,
                                                double total_span) {
  std::vector<TrajectoryScore> scores;
  scores.reserve(trajectories.size());
  for (const Trajectory& traj : trajectories) {
    scores.push_back(score_trajectory(traj, k, total_span));
  }
  return scores;
}

std::vector<Trajectory> filter_trajectories(std::span<const Trajectory> trajectories,
                                            std::span<const TrajectoryScore> scores,
                                            double stability_threshold, double degree_threshold) {
  std::vector<Trajectory> kept;
  for (size_t i = 0; i < trajectories.size(); ++i) {
    if (scores[i].stability >= stability_threshold && scores[i].avg_degree >= degree_threshold) {
      kept.push_back(trajectories[i]);
    }
  }
  return kept;
}

double regional_max(const FieldFrame& frame, const TriangleMesh& mesh, const std::string& channel,
                    Vec2 center, double radius) {
  auto it = frame.scalars.find(channel);
  if (it == frame.scalars.end()) throw DataError("unknown scalar channel '" + channel + "'");
  const auto& values = it->second;
  const double r2 = radius * radius;
  bool any = false;
  double best = 0.0;
  for (int v = 0; v < mesh.vertex_count(); ++v) {
    const double dx = mesh.vertices[v].x - center.x;
    const double dy = mesh.vertices[v].y - center.y;
    if (dx * dx + dy * dy > r2) continue;
    if (!any || values[v] > best) best = values[v];
    any = true;
  }
  if (!any) throw DataError("regional_max: empty region");
  return best;
}

double pearson(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("pearson: length mismatch");
  const size_t n = a.size();
  if (n < 3) throw DataError("degenerate series");
  double mean_a = 0.0, mean_b = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double cov = 0.0, var_a = 0.0, var_b = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    cov += da * db;
    var_a += da * da;
    var_b += db * db;
  }
  if (var_a == 0.0 || var_b == 0.0) throw DataError("degenerate series");
  return cov / std::sqrt(var_a * var_b);
}

std::vector<SweepCell> sweep(std::span<const Trajectory> trajectories,
                             const SegmentationConfig& base, std::span<const double> k_values,
                             std::span<const double> sigma_values, double stability_threshold,
                             double degree_threshold, double total_span, int workers) {
  std::vector<SweepCell> cells;
  for (double k : k_values) {
    for (double sigma : sigma_values) cells.push_back({k, sigma, 0});
  }
  run_indexed_tasks(static_cast<int>(cells.size()), workers, [&](int i) {
    SegmentationConfig config = base;
    config.k = cells[i].k;
    config.sigma = cells[i].sigma;
    std::vector<Trajectory> pieces;
    for (const Trajectory& traj : trajectories) {
      for (Trajectory& piece : segment_trajectory(traj, config)) {
        piece.id = static_cast<int>(pieces.size());
        pieces.push_back(std::move(piece));
      }
    }
    const auto scores = score_trajectories(pieces, config.k, total_span);
    cells[i].count = static_cast<int>(
        filter_trajectories(pieces, scores, stability_threshold, degree_threshold).size());
  });
  return cells;
}

CorrelationRow correlate_trajectory(const Trajectory& traj, const TimeVaryingField& field,
                                    const std::string& channel, double radius) {
  std::vector<double> min_r;
  std::vector<double> series;
  for (const TrajectoryNode& node : traj.nodes) {
    if (!node.slice || !node.min_robustness) continue;
    if (node.min_robustness->unbounded()) continue;  // no finite pair value
    const int frame = *node.slice;
    if (frame < 0 || frame >= field.frame_count()) continue;
    series.push_back(
        regional_max(field.frames[frame], field.mesh, channel, {node.x, node.y}, radius));
    min_r.push_back(node.min_robustness->value);
  }
  CorrelationRow row;
  row.trajectory_id = traj.id;
  row.channel = channel;
  row.n_pairs = static_cast<int>(min_r.size());
  row.pearson = pearson(min_r, series);
  return row;
}

}  // namespace vfr
