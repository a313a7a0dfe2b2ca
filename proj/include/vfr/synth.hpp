#pragma once

#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vfr/field.hpp"

namespace vfr {

enum class ElementKind { Source, Sink, Saddle, Center };

std::string to_string(ElementKind kind);
ElementKind element_kind_from_string(const std::string& name);

/// Canonical flow feature moving along a piecewise-linear path, with a
/// Gaussian envelope so far-field magnitude is dominated by the nearest
/// element.
struct FlowElement {
  ElementKind kind = ElementKind::Center;
  double strength = 1.0;
  double decay = 0.1;
  std::vector<std::array<double, 3>> path;  // (t, x, y), ascending in t

  Vec2 position_at(double t) const;
  Vec2 velocity(Vec2 p, double t) const;

  static FlowElement steady(ElementKind kind, Vec2 position, double strength, double decay);
};

/// Regular triangulated grid over a box: (nx+1) x (ny+1) vertices, 2*nx*ny
/// triangles.
TriangleMesh grid_mesh(int nx, int ny, BBox box);

/// Sum of the element fields sampled at mesh vertices for each time.
TimeVaryingField render(std::span<const FlowElement> elements, TriangleMesh mesh,
                        std::span<const double> times, int workers = 1);

/// Samples an arbitrary analytic field fn(x, y, t) at mesh vertices.
TimeVaryingField sample_field(TriangleMesh mesh, std::span<const double> times,
                              const std::function<Vec2(double, double, double)>& fn);

/// Steady field with six critical points arranged so that full-domain
/// robustness groups the two strong centers (and the scaffold center) at a
/// high shared cancellation value, while each strong center's minimum
/// multilevel robustness is its small local saddle-pair value. Magnitude and
/// direction are constructed independently: the magnitude is a valley
/// network with prescribed col heights, the direction winds once around each
/// zero with the prescribed index.
TimeVaryingField boundary_effect_fixture(int resolution = 128, int frames = 4);

/// The fixture's prescribed structure, for tests.
struct BoundaryFixtureInfo {
  Vec2 center_a, saddle_a, center_b, saddle_b, scaffold_center, scaffold_saddle;
  double pair_col_a = 0.0;     // A <-> local saddle cancellation level
  double pair_col_b = 0.0;     // B <-> local saddle cancellation level
  double grouping_level = 0.0; // full-domain shared cancellation level
  double sea_level = 0.0;
};
BoundaryFixtureInfo boundary_effect_fixture_info();

/// Same landscape without the two weak saddles (and their corridors); the
/// centers' minimum multilevel robustness rises accordingly.
TimeVaryingField boundary_effect_fixture_without_saddles(int resolution = 128, int frames = 4);

std::vector<FlowElement> read_elements_json(const std::filesystem::path& path);
void write_elements_json(const std::filesystem::path& path, std::span<const FlowElement> elements);

}  // namespace vfr
