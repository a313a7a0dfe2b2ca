#include "vfr/bundle_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include <json.hpp>

#include "vfr/csv.hpp"
#include "vfr/errors.hpp"

namespace vfr {

namespace fs = std::filesystem;
using nlohmann::json;

std::string frame_file_name(int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "frame_%04d.csv", index);
  return buf;
}

namespace {

json load_json_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("missing file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  return j;
}

TriangleMesh load_mesh(const fs::path& path) {
  const json j = load_json_file(path);
  if (!j.contains("vertices") || !j.contains("triangles")) {
    throw DataError(path.string() + ": expected keys 'vertices' and 'triangles'");
  }
  std::vector<Vec2> vertices;
  for (const auto& v : j.at("vertices")) {
    if (!v.is_array() || v.size() != 2) throw DataError(path.string() + ": bad vertex entry");
    vertices.push_back({v[0].get<double>(), v[1].get<double>()});
  }
  std::vector<std::array<int, 3>> triangles;
  for (const auto& t : j.at("triangles")) {
    if (!t.is_array() || t.size() != 3) throw DataError(path.string() + ": bad triangle entry");
    triangles.push_back({t[0].get<int>(), t[1].get<int>(), t[2].get<int>()});
  }
  try {
    return TriangleMesh::create(std::move(vertices), std::move(triangles));
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

FieldFrame load_frame(const fs::path& path, int index, double time, size_t vertex_count) {
  std::ifstream in(path);
  if (!in) throw DataError("missing file: " + path.string());
  FieldFrame frame;
  frame.frame_index = index;
  frame.time = time;

  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty file");
  const auto header = split_csv_line(line);
  if (header.size() < 2 || header[0] != "vx" || header[1] != "vy") {
    throw DataError(path.string() + ":1: header must start with 'vx,vy'");
  }
  std::vector<std::string> channels(header.begin() + 2, header.end());
  for (const auto& name : channels) frame.scalars[name].reserve(vertex_count);

  size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto cells = split_csv_line(line);
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (cells.size() != header.size()) {
      throw DataError(where + ": expected " + std::to_string(header.size()) + " columns, got " +
                      std::to_string(cells.size()));
    }
    Vec2 v{parse_double(cells[0], where), parse_double(cells[1], where)};
    if (!std::isfinite(v.x) || !std::isfinite(v.y)) throw DataError(where + ": non-finite vector");
    frame.vectors.push_back(v);
    for (size_t c = 0; c < channels.size(); ++c) {
      const double s = parse_double(cells[2 + c], where);
      if (!std::isfinite(s)) throw DataError(where + ": non-finite scalar");
      frame.scalars[channels[c]].push_back(s);
    }
  }
  if (frame.vectors.size() != vertex_count) {
    throw DataError(path.string() + ": row count mismatch: " + std::to_string(frame.vectors.size()) +
                    " rows for " + std::to_string(vertex_count) + " vertices");
  }
  return frame;
}

}  // namespace

TimeVaryingField load_bundle(const fs::path& dir) {
  TimeVaryingField field;
  field.mesh = load_mesh(dir / "mesh.json");

  const fs::path manifest_path = dir / "bundle.json";
  const json manifest = load_json_file(manifest_path);
  if (!manifest.contains("frames")) {
    throw DataError(manifest_path.string() + ": missing key 'frames'");
  }
  const int n_frames = manifest.at("frames").get<int>();
  if (n_frames < 1) throw DataError(manifest_path.string() + ": 'frames' must be >= 1");

  std::vector<double> times;
  if (manifest.contains("times")) {
    times = manifest.at("times").get<std::vector<double>>();
    if (static_cast<int>(times.size()) != n_frames) {
      throw DataError(manifest_path.string() + ": 'times' length does not match 'frames'");
    }
  } else if (manifest.contains("dt")) {
    const double dt = manifest.at("dt").get<double>();
    if (!(dt > 0.0)) throw DataError(manifest_path.string() + ": 'dt' must be positive");
    for (int i = 0; i < n_frames; ++i) times.push_back(dt * i);
  } else {
    throw DataError(manifest_path.string() + ": need either 'dt' or 'times'");
  }

  for (int i = 0; i < n_frames; ++i) {
    field.frames.push_back(
        load_frame(dir / frame_file_name(i), i, times[i], field.mesh.vertices.size()));
  }
  field.validate();
  return field;
}

void save_bundle(const TimeVaryingField& field, const fs::path& dir) {
  fs::create_directories(dir);

  {
    json mesh_json;
    auto& verts = mesh_json["vertices"] = json::array();
    for (const Vec2& v : field.mesh.vertices) verts.push_back({v.x, v.y});
    auto& tris = mesh_json["triangles"] = json::array();
    for (const auto& t : field.mesh.triangles) tris.push_back({t[0], t[1], t[2]});
    std::ofstream out(dir / "mesh.json", std::ios::binary);
    out << mesh_json.dump() << '\n';
  }

  {
    json manifest;
    manifest["frames"] = field.frame_count();
    auto& times = manifest["times"] = json::array();
    for (const FieldFrame& f : field.frames) times.push_back(f.time);
    std::ofstream out(dir / "bundle.json", std::ios::binary);
    out << manifest.dump() << '\n';
  }

  for (const FieldFrame& frame : field.frames) {
    std::ofstream out(dir / frame_file_name(frame.frame_index), std::ios::binary);
    out << "vx,vy";
    for (const auto& [name, values] : frame.scalars) out << ',' << name;
    out << '\n';
    for (size_t v = 0; v < frame.vectors.size(); ++v) {
      out << format_double(frame.vectors[v].x) << ',' << format_double(frame.vectors[v].y);
      for (const auto& [name, values] : frame.scalars) out << ',' << format_double(values[v]);
      out << '\n';
    }
  }
}

}  // namespace vfr
