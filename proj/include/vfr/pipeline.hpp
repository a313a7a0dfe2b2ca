#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "vfr/selection.hpp"
#include "vfr/synth.hpp"
#include "vfr/task_pool.hpp"

namespace vfr {

/// Stage configuration mirroring the CLI flags. Stages read their
/// prerequisites from `out` (except the bundle, read from `input`) and write
/// their artifacts into `out`; rerunning a stage with identical inputs
/// reproduces byte-identical data outputs for any worker count.
struct PipelineConfig {
  std::filesystem::path input;
  std::filesystem::path out;
  int levels = 50;
  double k = 0.5;
  double sigma = 0.2;
  int bridge_gap = 2;
  double stability_threshold = 0.0;
  double degree_threshold = -1.0;
  int workers = default_workers();
  bool oracle = false;
  std::string channel;
  double radius = 5.0;
};

struct SynthConfig {
  std::filesystem::path elements;  // elements.json; ignored when fixture set
  std::string fixture;             // "boundary-effect", "boundary-effect-clean", or empty
  int nx = 64;
  int ny = 64;
  BBox box{{0.0, 0.0}, {1.0, 1.0}};
  int frames = 1;
  double dt = 1.0;
  std::filesystem::path out;
  int workers = default_workers();
};

void run_synth_stage(const SynthConfig& config);
void run_extract_stage(const PipelineConfig& config);
void run_robustness_stage(const PipelineConfig& config);
void run_track_stage(const PipelineConfig& config);
void run_segment_stage(const PipelineConfig& config);
void run_filter_stage(const PipelineConfig& config);
void run_correlate_stage(const PipelineConfig& config);
void run_sweep_stage(const PipelineConfig& config, const std::vector<double>& k_values,
                     const std::vector<double>& sigma_values);
void run_report_stage(const PipelineConfig& config);

/// Minimum multilevel robustness per (frame, cp_id), reduced from profiles.
std::vector<std::vector<Robustness>> min_robustness_table(
    const std::vector<RobustnessProfile>& profiles,
    const std::vector<std::vector<CriticalPoint>>& per_frame_cps);

}  // namespace vfr
