#include "support/fixtures.hpp"

#include <unistd.h>

#include <atomic>
#include <random>
#include <stdexcept>

namespace vfr::testing {

namespace {

// One attempt: scatter a few mixed elements, render, extract, and gate on
// the census (superpositions create extra zeros in the low-magnitude sea, so
// the census is checked on the extraction, not the element count).
bool try_layout(std::mt19937& rng, int min_cps, int max_cps, int resolution, RandomField& out) {
  std::uniform_real_distribution<double> coord(0.18, 0.82);
  std::uniform_real_distribution<double> mag(0.8, 1.3);
  std::uniform_int_distribution<int> n_dist(2, 4);
  std::uniform_int_distribution<int> kind_dist(0, 3);
  std::bernoulli_distribution flip(0.5);
  constexpr double kSeparation = 0.24;
  constexpr double kDecay = 0.06;

  const int n = n_dist(rng);
  std::vector<Vec2> positions;
  for (int i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < 200 && !placed; ++attempt) {
      const Vec2 p{coord(rng), coord(rng)};
      placed = true;
      for (const Vec2& q : positions) {
        if (distance(p, q) < kSeparation) {
          placed = false;
          break;
        }
      }
      if (placed) positions.push_back(p);
    }
    if (!placed) return false;
  }

  std::vector<FlowElement> elements;
  for (int i = 0; i < n; ++i) {
    const auto kind = static_cast<ElementKind>(kind_dist(rng));
    const double s = mag(rng) * (flip(rng) ? 1.0 : -1.0);
    elements.push_back(FlowElement::steady(kind, positions[i], s, kDecay));
  }

  const std::vector<double> times{0.0};
  TimeVaryingField field =
      render(elements, grid_mesh(resolution, resolution, {{0.0, 0.0}, {1.0, 1.0}}), times);
  auto cps = extract_critical_points(field.frames[0], field.mesh);
  const int census = static_cast<int>(cps.size());
  if (census < min_cps || census > max_cps) return false;

  // Grid oracles seed critical points at nearest grid nodes; keep them apart.
  for (size_t a = 0; a < cps.size(); ++a) {
    for (size_t b = a + 1; b < cps.size(); ++b) {
      if (distance(cps[a].position, cps[b].position) < 0.035) return false;
    }
  }

  out.field = std::move(field);
  out.cps = std::move(cps);
  return true;
}

}  // namespace

RandomField make_random_field(unsigned seed, int min_cps, int max_cps, int resolution) {
  std::mt19937 rng(seed);
  for (int bump = 0; bump < 256; ++bump) {
    RandomField out;
    if (try_layout(rng, min_cps, max_cps, resolution, out)) return out;
  }
  throw std::runtime_error("make_random_field: no valid layout for seed " + std::to_string(seed));
}

RandomField make_pair_field(int resolution) {
  RandomField out;
  const std::vector<FlowElement> elements{
      FlowElement::steady(ElementKind::Source, {0.38, 0.503}, 1.0, 0.09),
      FlowElement::steady(ElementKind::Saddle, {0.62, 0.503}, -1.0, 0.09),
  };
  const std::vector<double> times{0.0};
  out.field =
      render(elements, grid_mesh(resolution, resolution, {{0.0, 0.0}, {1.0, 1.0}}), times);
  out.cps = extract_critical_points(out.field.frames[0], out.field.mesh);
  if (out.cps.size() != 2) throw std::runtime_error("make_pair_field: census is not 2");
  return out;
}

TimeVaryingField unit_square_field(Vec2 value) {
  TimeVaryingField field;
  field.mesh = TriangleMesh::create({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, {{0, 1, 2}, {0, 2, 3}});
  FieldFrame frame;
  frame.frame_index = 0;
  frame.time = 0.0;
  frame.vectors.assign(4, value);
  field.frames.push_back(std::move(frame));
  return field;
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<unsigned> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("vfr_test_" + tag + "_" + std::to_string(counter++) + "_" +
           std::to_string(::getpid()));
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

}  // namespace vfr::testing
