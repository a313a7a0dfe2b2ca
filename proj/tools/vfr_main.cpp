// vfr: multilevel robustness pipeline for 2D time-varying vector fields.
// Subcommands mirror the pipeline stages; every stage is deterministic and
// idempotent, so reruns (with any --workers) reproduce identical data files.

#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vfr/errors.hpp"
#include "vfr/pipeline.hpp"

namespace {

void add_common(CLI::App* cmd, vfr::PipelineConfig& config, bool needs_input = true) {
  auto* input = cmd->add_option("--input", config.input, "input bundle directory");
  if (needs_input) input->required();
  cmd->add_option("--out", config.out, "output directory")->required();
  cmd->add_option("--workers", config.workers, "worker count (results are identical for any value)")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multilevel robustness for critical points of 2D time-varying vector fields"};
  app.require_subcommand(1);

  vfr::PipelineConfig config;
  vfr::SynthConfig synth;
  std::vector<double> sweep_k{0.5};
  std::vector<double> sweep_sigma{0.2};

  auto* synth_cmd = app.add_subcommand("synth", "render a synthetic bundle");
  synth_cmd->add_option("--elements", synth.elements, "elements.json describing flow features");
  synth_cmd->add_option("--fixture", synth.fixture,
                        "built-in fixture: boundary-effect | boundary-effect-clean");
  synth_cmd->add_option("--nx", synth.nx, "grid cells in x")->check(CLI::PositiveNumber);
  synth_cmd->add_option("--ny", synth.ny, "grid cells in y")->check(CLI::PositiveNumber);
  std::vector<double> bbox;
  synth_cmd->add_option("--bbox", bbox, "domain box: x0,y0,x1,y1")->delimiter(',')->expected(4);
  synth_cmd->add_option("--frames", synth.frames, "number of time steps");
  synth_cmd->add_option("--dt", synth.dt, "time gap between steps");
  synth_cmd->add_option("--out", synth.out, "output bundle directory")->required();
  synth_cmd->add_option("--workers", synth.workers, "worker count")->check(CLI::PositiveNumber);

  auto* extract_cmd = app.add_subcommand("extract", "extract per-frame critical points");
  add_common(extract_cmd, config);

  auto* robustness_cmd =
      app.add_subcommand("robustness", "multilevel robustness profiles (n x N task farm)");
  add_common(robustness_cmd, config);
  robustness_cmd->add_option("--levels", config.levels, "number of sampled radii N")
      ->check(CLI::PositiveNumber);
  robustness_cmd->add_flag("--oracle", config.oracle,
                           "evaluate the exact per-partner step function instead of N levels");

  auto* track_cmd = app.add_subcommand("track", "extract spacetime trajectories");
  add_common(track_cmd, config);

  auto* segment_cmd = app.add_subcommand("segment", "segment trajectories by robustness");
  add_common(segment_cmd, config);
  segment_cmd->add_option("--k", config.k, "logistic steepness")->check(CLI::PositiveNumber);
  segment_cmd->add_option("--sigma", config.sigma, "KDE bandwidth");
  segment_cmd->add_option("--bridge-gap", config.bridge_gap,
                          "max removed annotated nodes a bridge may span");

  auto* filter_cmd = app.add_subcommand("filter", "score and filter trajectories");
  add_common(filter_cmd, config);
  filter_cmd->add_option("--k", config.k, "logistic steepness")->check(CLI::PositiveNumber);
  filter_cmd->add_option("--stability-threshold", config.stability_threshold,
                         "keep trajectories with b >= threshold");
  filter_cmd->add_option("--degree-threshold", config.degree_threshold,
                         "keep trajectories with d >= threshold");

  auto* correlate_cmd =
      app.add_subcommand("correlate", "correlate minR with a scalar channel's regional max");
  add_common(correlate_cmd, config);
  correlate_cmd->add_option("--channel", config.channel, "scalar channel name")->required();
  correlate_cmd->add_option("--radius", config.radius, "regional max radius (domain units)");

  auto* sweep_cmd = app.add_subcommand("sweep", "trajectory counts over a k/sigma grid");
  add_common(sweep_cmd, config);
  sweep_cmd->add_option("--k", sweep_k, "comma-separated k values")->delimiter(',');
  sweep_cmd->add_option("--sigma", sweep_sigma, "comma-separated sigma values")->delimiter(',');
  sweep_cmd->add_option("--bridge-gap", config.bridge_gap, "bridge gap");
  sweep_cmd->add_option("--stability-threshold", config.stability_threshold, "stability threshold");
  sweep_cmd->add_option("--degree-threshold", config.degree_threshold, "degree threshold");

  auto* report_cmd =
      app.add_subcommand("report", "per-level timing boxplot data and per-trajectory minR series");
  add_common(report_cmd, config, /*needs_input=*/false);
  report_cmd->add_option("--k", config.k, "logistic steepness for l(minR)")
      ->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth_cmd->parsed()) {
      if (bbox.size() == 4) synth.box = {{bbox[0], bbox[1]}, {bbox[2], bbox[3]}};
      vfr::run_synth_stage(synth);
    } else if (extract_cmd->parsed()) {
      vfr::run_extract_stage(config);
    } else if (robustness_cmd->parsed()) {
      vfr::run_robustness_stage(config);
    } else if (track_cmd->parsed()) {
      vfr::run_track_stage(config);
    } else if (segment_cmd->parsed()) {
      vfr::run_segment_stage(config);
    } else if (filter_cmd->parsed()) {
      vfr::run_filter_stage(config);
    } else if (correlate_cmd->parsed()) {
      vfr::run_correlate_stage(config);
    } else if (sweep_cmd->parsed()) {
      vfr::run_sweep_stage(config, sweep_k, sweep_sigma);
    } else if (report_cmd->parsed()) {
      vfr::run_report_stage(config);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
