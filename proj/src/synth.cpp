#include "vfr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "vfr/errors.hpp"
#include "vfr/task_pool.hpp"

namespace vfr {

std::string to_string(ElementKind kind) {
  switch (kind) {
    case ElementKind::Source: return "source";
    case ElementKind::Sink: return "sink";
    case ElementKind::Saddle: return "saddle";
    case ElementKind::Center: return "center";
  }
  return "center";
}

ElementKind element_kind_from_string(const std::string& name) {
  if (name == "source") return ElementKind::Source;
  if (name == "sink") return ElementKind::Sink;
  if (name == "saddle") return ElementKind::Saddle;
  if (name == "center") return ElementKind::Center;
  throw DataError("unknown element kind '" + name + "'");
}

Vec2 FlowElement::position_at(double t) const {
  if (path.empty()) throw std::invalid_argument("flow element has an empty path");
  if (t <= path.front()[0]) return {path.front()[1], path.front()[2]};
  if (t >= path.back()[0]) return {path.back()[1], path.back()[2]};
  for (size_t i = 1; i < path.size(); ++i) {
    if (t <= path[i][0]) {
      const double span = path[i][0] - path[i - 1][0];
      const double w = span > 0.0 ? (t - path[i - 1][0]) / span : 1.0;
      return {path[i - 1][1] + w * (path[i][1] - path[i - 1][1]),
              path[i - 1][2] + w * (path[i][2] - path[i - 1][2])};
    }
  }
  return {path.back()[1], path.back()[2]};
}

Vec2 FlowElement::velocity(Vec2 p, double t) const {
  const Vec2 c = position_at(t);
  const double dx = p.x - c.x;
  const double dy = p.y - c.y;
  const double scale = strength * std::exp(-(dx * dx + dy * dy) / (decay * decay));
  switch (kind) {
    case ElementKind::Source: return {scale * dx, scale * dy};
    case ElementKind::Sink: return {-scale * dx, -scale * dy};
    case ElementKind::Saddle: return {scale * dx, -scale * dy};
    case ElementKind::Center: return {-scale * dy, scale * dx};
  }
  return {};
}

FlowElement FlowElement::steady(ElementKind kind, Vec2 position, double strength, double decay) {
  FlowElement e;
  e.kind = kind;
  e.strength = strength;
  e.decay = decay;
  e.path = {{0.0, position.x, position.y}};
  return e;
}

TriangleMesh grid_mesh(int nx, int ny, BBox box) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("grid_mesh: need at least 1x1 cells");
  std::vector<Vec2> vertices;
  vertices.reserve(static_cast<size_t>(nx + 1) * (ny + 1));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      vertices.push_back({box.lo.x + box.width() * i / nx, box.lo.y + box.height() * j / ny});
    }
  }
  auto vid = [nx](int i, int j) { return j * (nx + 1) + i; };
  std::vector<std::array<int, 3>> triangles;
  triangles.reserve(static_cast<size_t>(nx) * ny * 2);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      triangles.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
      triangles.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
    }
  }
  return TriangleMesh::create(std::move(vertices), std::move(triangles));
}

TimeVaryingField sample_field(TriangleMesh mesh, std::span<const double> times,
                              const std::function<Vec2(double, double, double)>& fn) {
  TimeVaryingField field;
  field.mesh = std::move(mesh);
  for (size_t k = 0; k < times.size(); ++k) {
    FieldFrame frame;
    frame.frame_index = static_cast<int>(k);
    frame.time = times[k];
    frame.vectors.resize(field.mesh.vertices.size());
    for (size_t v = 0; v < field.mesh.vertices.size(); ++v) {
      frame.vectors[v] = fn(field.mesh.vertices[v].x, field.mesh.vertices[v].y, times[k]);
    }
    field.frames.push_back(std::move(frame));
  }
  field.validate();
  return field;
}

TimeVaryingField render(std::span<const FlowElement> elements, TriangleMesh mesh,
                        std::span<const double> times, int workers) {
  if (elements.empty()) throw std::invalid_argument("render: no elements");
  TimeVaryingField field;
  field.mesh = std::move(mesh);
  field.frames.resize(times.size());
  run_indexed_tasks(static_cast<int>(times.size()), workers, [&](int k) {
    FieldFrame frame;
    frame.frame_index = k;
    frame.time = times[k];
    frame.vectors.resize(field.mesh.vertices.size());
    for (size_t v = 0; v < field.mesh.vertices.size(); ++v) {
      Vec2 sum;
      for (const FlowElement& e : elements) {
        sum += e.velocity(field.mesh.vertices[v], times[k]);
      }
      frame.vectors[v] = sum;
    }
    field.frames[k] = std::move(frame);
  });
  field.validate();
  return field;
}

namespace {

// Valley-network magnitude landscape: the field magnitude is the pointwise
// minimum of a plateau cap, a cone at each zero, and flat-floored corridors
// with unit side slopes. Col heights between zeros are therefore exactly the
// corridor floor heights.
struct Corridor {
  Vec2 a, b;
  double height;
};

constexpr double kCap = 0.2;
constexpr double kFloorHalfWidth = 0.02;

double dist_to_segment(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  double s = len2 > 0.0 ? dot(p - a, ab) / len2 : 0.0;
  s = std::clamp(s, 0.0, 1.0);
  const Vec2 proj = a + ab * s;
  return distance(p, proj);
}

struct ValleyField {
  std::vector<Vec2> zeros;
  std::vector<int> winding;
  std::vector<Corridor> corridors;

  double magnitude(Vec2 p) const {
    double r = kCap;
    for (const Vec2& z : zeros) r = std::min(r, distance(p, z));
    for (const Corridor& c : corridors) {
      r = std::min(r, c.height + std::max(0.0, dist_to_segment(p, c.a, c.b) - kFloorHalfWidth));
    }
    return r;
  }

  Vec2 value(Vec2 p) const {
    double theta = 0.0;
    for (size_t i = 0; i < zeros.size(); ++i) {
      theta += winding[i] * std::atan2(p.y - zeros[i].y, p.x - zeros[i].x);
    }
    const double r = magnitude(p);
    return {r * std::cos(theta), r * std::sin(theta)};
  }
};

BoundaryFixtureInfo fixture_info() {
  BoundaryFixtureInfo info;
  info.center_a = {0.1603, 0.5021};
  info.saddle_a = {0.0511, 0.5021};
  info.center_b = {0.8397, 0.5021};
  info.saddle_b = {0.9489, 0.5021};
  info.scaffold_center = {0.5007, 0.8611};
  info.scaffold_saddle = {0.5007, 0.1013};
  info.pair_col_a = 0.010;
  info.pair_col_b = 0.012;
  info.grouping_level = 0.080;
  info.sea_level = 0.004;
  return info;
}

ValleyField fixture_field(bool with_weak_saddles) {
  const BoundaryFixtureInfo info = fixture_info();
  ValleyField field;
  field.zeros = {info.center_a, info.center_b, info.scaffold_center, info.scaffold_saddle};
  field.winding = {1, 1, 1, -1};
  if (with_weak_saddles) {
    field.zeros.push_back(info.saddle_a);
    field.zeros.push_back(info.saddle_b);
    field.winding.push_back(-1);
    field.winding.push_back(-1);
    // Local cancellation corridors and the saddles' leaks into the sea. The
    // leaks sit below the pair cols, so in the full domain each center meets
    // an already-mixed component and stays uncancelled until the scaffold
    // center joins at the grouping level.
    field.corridors.push_back({info.center_a, info.saddle_a, info.pair_col_a});
    field.corridors.push_back({info.center_b, info.saddle_b, info.pair_col_b});
    field.corridors.push_back({info.saddle_a, info.scaffold_saddle, info.sea_level});
    field.corridors.push_back({info.saddle_b, info.scaffold_saddle, info.sea_level});
  }
  field.corridors.push_back({info.scaffold_center, info.scaffold_saddle, info.grouping_level});
  return field;
}

TimeVaryingField render_fixture(const ValleyField& vf, int resolution, int frames) {
  if (resolution < 16) throw std::invalid_argument("fixture: resolution too small");
  if (frames < 1) throw std::invalid_argument("fixture: need at least 1 frame");
  TriangleMesh mesh = grid_mesh(resolution, resolution, {{0.0, 0.0}, {1.0, 1.0}});
  std::vector<double> times(frames);
  for (int k = 0; k < frames; ++k) times[k] = k;
  return sample_field(std::move(mesh), times,
                      [&vf](double x, double y, double) { return vf.value({x, y}); });
}

}  // namespace

BoundaryFixtureInfo boundary_effect_fixture_info() { return fixture_info(); }

TimeVaryingField boundary_effect_fixture(int resolution, int frames) {
  return render_fixture(fixture_field(true), resolution, frames);
}

TimeVaryingField boundary_effect_fixture_without_saddles(int resolution, int frames) {
  return render_fixture(fixture_field(false), resolution, frames);
}

std::vector<FlowElement> read_elements_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("missing file: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  std::vector<FlowElement> elements;
  for (const auto& ej : j) {
    FlowElement e;
    e.kind = element_kind_from_string(ej.at("kind").get<std::string>());
    e.strength = ej.at("strength").get<double>();
    e.decay = ej.at("decay").get<double>();
    if (!(e.decay > 0.0)) throw DataError(path.string() + ": decay must be positive");
    if (e.strength == 0.0) throw DataError(path.string() + ": strength must be nonzero");
    for (const auto& pj : ej.at("path")) {
      if (!pj.is_array() || pj.size() != 3) throw DataError(path.string() + ": bad path entry");
      e.path.push_back({pj[0].get<double>(), pj[1].get<double>(), pj[2].get<double>()});
    }
    if (e.path.empty()) throw DataError(path.string() + ": empty path");
    for (size_t i = 1; i < e.path.size(); ++i) {
      if (!(e.path[i][0] >= e.path[i - 1][0])) {
        throw DataError(path.string() + ": path times must be non-decreasing");
      }
    }
    elements.push_back(std::move(e));
  }
  if (elements.empty()) throw DataError(path.string() + ": no elements");
  return elements;
}

void write_elements_json(const std::filesystem::path& path,
                         std::span<const FlowElement> elements) {
  nlohmann::json j = nlohmann::json::array();
  for (const FlowElement& e : elements) {
    nlohmann::json ej;
    ej["kind"] = to_string(e.kind);
    ej["strength"] = e.strength;
    ej["decay"] = e.decay;
    ej["path"] = e.path;
    j.push_back(std::move(ej));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << j.dump() << '\n';
}

}  // namespace vfr
