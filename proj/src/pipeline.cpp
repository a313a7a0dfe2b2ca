#include "vfr/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "vfr/bundle_io.hpp"
#include "vfr/csv.hpp"
#include "vfr/errors.hpp"
#include "vfr/tracking.hpp"

namespace vfr {

namespace fs = std::filesystem;

namespace {

void require_stage_file(const fs::path& path, const std::string& stage) {
  if (!fs::exists(path)) {
    throw DataError("missing " + path.string() + "; run `vfr " + stage + "` first");
  }
}

TimeVaryingField load_input(const PipelineConfig& config) {
  if (config.input.empty()) throw DataError("no input bundle given (--input)");
  return load_bundle(config.input);
}

std::vector<std::vector<CriticalPoint>> extract_all(const TimeVaryingField& field, int workers) {
  std::vector<std::vector<CriticalPoint>> per_frame(field.frame_count());
  run_indexed_tasks(field.frame_count(), workers, [&](int f) {
    per_frame[f] = extract_critical_points(field.frames[f], field.mesh);
  });
  return per_frame;
}

std::vector<std::vector<CriticalPoint>> load_critical_points(const PipelineConfig& config,
                                                             const TimeVaryingField& field) {
  const fs::path path = config.out / "critical_points.csv";
  require_stage_file(path, "extract");
  auto per_frame = read_critical_points_csv(path, field.mesh);
  per_frame.resize(field.frame_count());
  return per_frame;
}

std::vector<RobustnessProfile> load_profiles(const PipelineConfig& config) {
  const fs::path path = config.out / "robustness.csv";
  require_stage_file(path, "robustness");
  return read_robustness_csv(path);
}

std::vector<Trajectory> load_annotated_trajectories(const PipelineConfig& config,
                                                    const TimeVaryingField& field) {
  const fs::path path = config.out / "trajectories.json";
  require_stage_file(path, "track");
  auto trajectories = read_trajectories_json(path);
  const auto per_frame_cps = load_critical_points(config, field);
  const auto table = min_robustness_table(load_profiles(config), per_frame_cps);
  for (Trajectory& traj : trajectories) {
    slice_annotate(traj, per_frame_cps, table, field.mesh.diameter);
  }
  return trajectories;
}

SegmentationConfig segmentation_config(const PipelineConfig& config) {
  SegmentationConfig seg;
  seg.k = config.k;
  seg.sigma = config.sigma;
  seg.bridge_gap = config.bridge_gap;
  seg.validate();
  return seg;
}

double quantile(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double pos = q * (sorted.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double w = pos - lo;
  return sorted[lo] * (1.0 - w) + sorted[hi] * w;
}

}  // namespace

std::vector<std::vector<Robustness>> min_robustness_table(
    const std::vector<RobustnessProfile>& profiles,
    const std::vector<std::vector<CriticalPoint>>& per_frame_cps) {
  std::vector<std::vector<Robustness>> table(per_frame_cps.size());
  for (size_t f = 0; f < per_frame_cps.size(); ++f) {
    table[f].assign(per_frame_cps[f].size(), Robustness::unbounded_value());
  }
  for (const RobustnessProfile& p : profiles) {
    if (p.frame_index < 0 || p.frame_index >= static_cast<int>(table.size())) continue;
    if (p.cp_id < 0 || p.cp_id >= static_cast<int>(table[p.frame_index].size())) {
      throw DataError("robustness.csv refers to unknown critical point " + std::to_string(p.cp_id) +
                      " in frame " + std::to_string(p.frame_index));
    }
    table[p.frame_index][p.cp_id] = p.min_value;
  }
  return table;
}

void run_synth_stage(const SynthConfig& config) {
  if (config.out.empty()) throw DataError("no output directory given (--out)");
  TimeVaryingField field;
  if (config.fixture == "boundary-effect") {
    field = boundary_effect_fixture();
  } else if (config.fixture == "boundary-effect-clean") {
    field = boundary_effect_fixture_without_saddles();
  } else if (!config.fixture.empty()) {
    throw DataError("unknown fixture '" + config.fixture + "'");
  } else {
    if (config.elements.empty()) throw DataError("need --elements or --fixture");
    if (config.frames < 1) throw DataError("--frames must be >= 1");
    if (!(config.dt > 0.0)) throw DataError("--dt must be positive");
    const auto elements = read_elements_json(config.elements);
    std::vector<double> times(config.frames);
    for (int k = 0; k < config.frames; ++k) times[k] = config.dt * k;
    field = render(elements, grid_mesh(config.nx, config.ny, config.box), times, config.workers);
  }
  save_bundle(field, config.out);
}

void run_extract_stage(const PipelineConfig& config) {
  const TimeVaryingField field = load_input(config);
  fs::create_directories(config.out);
  const auto per_frame = extract_all(field, config.workers);
  write_critical_points_csv(config.out / "critical_points.csv", per_frame);
}

void run_robustness_stage(const PipelineConfig& config) {
  if (config.levels < 1) throw DataError("--levels must be >= 1");
  const TimeVaryingField field = load_input(config);
  const auto per_frame = load_critical_points(config, field);
  const TaskFarmResult result =
      run_task_farm(field, per_frame, config.levels, config.workers, config.oracle);
  std::string failed;
  for (const TaskTiming& t : result.timings) {
    if (t.failed) failed += (failed.empty() ? "" : ", ") + std::to_string(t.task_id);
  }
  if (!failed.empty()) throw DataError("robustness tasks failed: " + failed);
  write_robustness_csv(config.out / "robustness.csv", result.profiles);
  write_timing_csv(config.out / "timing.csv", result.timings);
}

void run_track_stage(const PipelineConfig& config) {
  const TimeVaryingField field = load_input(config);
  if (field.frame_count() < 2) throw DataError("tracking needs at least 2 frames");
  fs::create_directories(config.out);
  const SpacetimeMesh st = build_spacetime_mesh(field);
  const auto trajectories = extract_trajectories(st, config.workers);
  write_trajectories_json(config.out / "trajectories.json", trajectories);
}

void run_segment_stage(const PipelineConfig& config) {
  const TimeVaryingField field = load_input(config);
  const auto trajectories = load_annotated_trajectories(config, field);
  const SegmentationConfig seg = segmentation_config(config);

  std::vector<std::vector<Trajectory>> segmented(trajectories.size());
  run_indexed_tasks(static_cast<int>(trajectories.size()), config.workers,
                    [&](int i) { segmented[i] = segment_trajectory(trajectories[i], seg); });

  std::vector<Trajectory> out;
  for (auto& pieces : segmented) {
    for (Trajectory& piece : pieces) {
      piece.id = static_cast<int>(out.size());
      out.push_back(std::move(piece));
    }
  }
  write_trajectories_json(config.out / "trajectories_segmented.json", out);
}

void run_filter_stage(const PipelineConfig& config) {
  const TimeVaryingField field = load_input(config);
  const fs::path segmented_path = config.out / "trajectories_segmented.json";
  require_stage_file(segmented_path, "segment");
  const auto trajectories = read_trajectories_json(segmented_path);
  const double span = field.time_span() > 0.0 ? field.time_span() : 1.0;
  const auto scores = score_trajectories(trajectories, config.k, span);

  std::vector<std::vector<std::string>> rows;
  for (const TrajectoryScore& s : scores) {
    rows.push_back({std::to_string(s.id), format_double(s.stability), format_double(s.avg_degree),
                    format_double(s.t_span), std::to_string(s.length)});
  }
  write_csv(config.out / "scores.csv", {"id", "b", "d", "t_span", "length"}, rows);

  const auto kept = filter_trajectories(trajectories, scores, config.stability_threshold,
                                        config.degree_threshold);
  write_trajectories_json(config.out / "trajectories_filtered.json", kept);
}

void run_correlate_stage(const PipelineConfig& config) {
  if (config.channel.empty()) throw DataError("correlate needs --channel");
  const TimeVaryingField field = load_input(config);
  const fs::path filtered_path = config.out / "trajectories_filtered.json";
  require_stage_file(filtered_path, "filter");
  const auto trajectories = read_trajectories_json(filtered_path);

  std::vector<std::vector<std::string>> rows;
  for (const Trajectory& traj : trajectories) {
    try {
      const CorrelationRow row =
          correlate_trajectory(traj, field, config.channel, config.radius);
      rows.push_back({std::to_string(row.trajectory_id), row.channel, format_double(row.pearson),
                      std::to_string(row.n_pairs)});
    } catch (const DataError& e) {
      std::cerr << "warning: trajectory " << traj.id << ": " << e.what() << ", skipped\n";
    }
  }
  write_csv(config.out / "correlation.csv", {"trajectory_id", "channel", "pearson", "n_pairs"},
            rows);
}

void run_sweep_stage(const PipelineConfig& config, const std::vector<double>& k_values,
                     const std::vector<double>& sigma_values) {
  if (k_values.empty() || sigma_values.empty()) throw DataError("sweep needs --k and --sigma");
  const TimeVaryingField field = load_input(config);
  const auto trajectories = load_annotated_trajectories(config, field);
  const double span = field.time_span() > 0.0 ? field.time_span() : 1.0;
  const SegmentationConfig base = segmentation_config(config);
  const auto cells = sweep(trajectories, base, k_values, sigma_values, config.stability_threshold,
                           config.degree_threshold, span, config.workers);

  std::vector<std::vector<std::string>> rows;
  for (const SweepCell& cell : cells) {
    rows.push_back({format_double(cell.k), format_double(cell.sigma), std::to_string(cell.count)});
  }
  write_csv(config.out / "sweep.csv", {"k", "sigma", "count"}, rows);
}

void run_report_stage(const PipelineConfig& config) {
  const fs::path timing_path = config.out / "timing.csv";
  require_stage_file(timing_path, "robustness");
  const CsvTable timing = read_csv(timing_path);
  const int level_col = timing.column("level");
  const int seconds_col = timing.column("seconds");
  if (level_col < 0 || seconds_col < 0) throw DataError(timing_path.string() + ": bad header");

  std::vector<std::vector<double>> by_level;
  for (const auto& row : timing.rows) {
    const int level = static_cast<int>(parse_long(row[level_col], "timing.csv"));
    if (level >= static_cast<int>(by_level.size())) by_level.resize(level + 1);
    by_level[level].push_back(parse_double(row[seconds_col], "timing.csv"));
  }
  std::vector<std::vector<std::string>> box_rows;
  for (size_t level = 0; level < by_level.size(); ++level) {
    auto& values = by_level[level];
    if (values.empty()) continue;
    std::sort(values.begin(), values.end());
    box_rows.push_back({std::to_string(level), format_double(values.front()),
                        format_double(quantile(values, 0.25)), format_double(quantile(values, 0.5)),
                        format_double(quantile(values, 0.75)), format_double(values.back())});
  }
  write_csv(config.out / "timing_boxplot.csv", {"level", "min", "q1", "median", "q3", "max"},
            box_rows);

  const fs::path segmented_path = config.out / "trajectories_segmented.json";
  require_stage_file(segmented_path, "segment");
  const auto trajectories = read_trajectories_json(segmented_path);
  std::vector<std::vector<std::string>> series_rows;
  for (const Trajectory& traj : trajectories) {
    for (const TrajectoryNode& node : traj.nodes) {
      if (!node.min_robustness) continue;
      series_rows.push_back({std::to_string(traj.id), std::to_string(node.index),
                             format_double(node.t), format_double(node.min_robustness->value),
                             format_double(logistic_stability(*node.min_robustness, config.k))});
    }
  }
  write_csv(config.out / "series.csv", {"trajectory_id", "node_index", "t", "minR", "l_minR"},
            series_rows);
}

}  // namespace vfr
