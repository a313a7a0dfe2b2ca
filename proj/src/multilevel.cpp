#include "vfr/multilevel.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "vfr/csv.hpp"
#include "vfr/errors.hpp"
#include "vfr/task_pool.hpp"

namespace vfr {

namespace {

constexpr double kBreakpointOffsetScale = 1e-6;

double robustness_to_double(const Robustness& r) { return r.value; }

}  // namespace

NeighborhoodSpec NeighborhoodSpec::at_level(Vec2 center, double domain_diameter, int level,
                                            int total_levels) {
  if (total_levels < 1 || level < 0 || level >= total_levels) {
    throw std::invalid_argument("NeighborhoodSpec: level out of range");
  }
  NeighborhoodSpec spec;
  spec.center = center;
  spec.level = level;
  spec.total_levels = total_levels;
  // Fraction first: the top level is then exactly the domain diameter, and
  // coinciding fractions of different N (e.g. 2/10 and 10/50) give bitwise
  // equal radii.
  spec.radius = domain_diameter * (static_cast<double>(level + 1) / total_levels);
  return spec;
}

SubDomain restrict_to_ball(const TriangleMesh& mesh, const FieldFrame& frame,
                           std::span<const CriticalPoint> cps, const NeighborhoodSpec& spec) {
  const int nv = mesh.vertex_count();
  const int nt = mesh.triangle_count();
  const double r2 = spec.radius * spec.radius;
  const Vec2 c = spec.center;

  auto inside = [&](Vec2 p) {
    const double dx = p.x - c.x;
    const double dy = p.y - c.y;
    return dx * dx + dy * dy <= r2;
  };

  std::vector<char> tri_in(nt, 0);
  for (int t = 0; t < nt; ++t) {
    const auto& tri = mesh.triangles[t];
    tri_in[t] = inside(mesh.vertices[tri[0]]) && inside(mesh.vertices[tri[1]]) &&
                inside(mesh.vertices[tri[2]]);
  }

  // Admission is by critical point position: any in-ball critical point gets
  // its triangle force-included, so the set of retained critical points is
  // exactly those within the ball radius.
  int center_cp_parent = -1;
  for (size_t i = 0; i < cps.size(); ++i) {
    if (inside(cps[i].position)) {
      tri_in[cps[i].triangle] = 1;
      if (cps[i].position.x == c.x && cps[i].position.y == c.y && center_cp_parent < 0) {
        center_cp_parent = static_cast<int>(i);
      }
    }
  }
  if (center_cp_parent < 0) {
    throw std::invalid_argument("restrict_to_ball: center is not a critical point position");
  }

  // Reduce to the connected component containing the center's triangle.
  std::vector<int> comp_parent(nv);
  std::iota(comp_parent.begin(), comp_parent.end(), 0);
  auto find = [&comp_parent](int i) {
    while (i != comp_parent[i]) {
      comp_parent[i] = comp_parent[comp_parent[i]];
      i = comp_parent[i];
    }
    return i;
  };
  for (int t = 0; t < nt; ++t) {
    if (!tri_in[t]) continue;
    const auto& tri = mesh.triangles[t];
    comp_parent[find(tri[0])] = find(tri[1]);
    comp_parent[find(tri[1])] = find(tri[2]);
  }
  const int center_root = find(mesh.triangles[cps[center_cp_parent].triangle][0]);

  // Keep vertex numbering in parent order so the radius-L subdomain is the
  // original mesh verbatim and tie-breaks are stable as the ball grows.
  std::vector<char> vert_in(nv, 0);
  for (int t = 0; t < nt; ++t) {
    if (!tri_in[t] || find(mesh.triangles[t][0]) != center_root) {
      tri_in[t] = 0;
      continue;
    }
    for (int v : mesh.triangles[t]) vert_in[v] = 1;
  }

  std::vector<int> vertex_map(nv, -1);
  SubDomain sub;
  const auto f0_full = magnitude_field(frame);
  for (int v = 0; v < nv; ++v) {
    if (!vert_in[v]) continue;
    vertex_map[v] = static_cast<int>(sub.mesh.vertices.size());
    sub.mesh.vertices.push_back(mesh.vertices[v]);
    sub.vertex_to_parent.push_back(v);
    sub.f0.push_back(f0_full[v]);
  }
  for (int t = 0; t < nt; ++t) {
    if (!tri_in[t]) continue;
    const auto& tri = mesh.triangles[t];
    sub.mesh.triangles.push_back({vertex_map[tri[0]], vertex_map[tri[1]], vertex_map[tri[2]]});
    sub.triangle_to_parent.push_back(t);
  }

  std::vector<int> tri_map(nt, -1);
  for (size_t t = 0; t < sub.triangle_to_parent.size(); ++t) {
    tri_map[sub.triangle_to_parent[t]] = static_cast<int>(t);
  }
  for (size_t i = 0; i < cps.size(); ++i) {
    if (!inside(cps[i].position) || tri_map[cps[i].triangle] < 0) continue;
    CriticalPoint cp = cps[i];
    cp.triangle = tri_map[cp.triangle];
    if (static_cast<int>(i) == center_cp_parent) sub.center_cp = static_cast<int>(sub.cps.size());
    sub.cps.push_back(cp);
  }
  return sub;
}

Robustness robustness_at_radius(const TriangleMesh& mesh, const FieldFrame& frame,
                                std::span<const CriticalPoint> cps, int cp_index, double radius) {
  NeighborhoodSpec spec;
  spec.center = cps[cp_index].position;
  spec.radius = radius;
  const SubDomain sub = restrict_to_ball(mesh, frame, cps, spec);
  const AugmentedMergeTree tree = build_merge_tree(sub.mesh, sub.f0, sub.cps);
  return classic_robustness(tree, cps[cp_index].id);
}

std::vector<double> partner_breakpoints(std::span<const CriticalPoint> cps, int cp_index,
                                        double domain_diameter) {
  const double delta = kBreakpointOffsetScale * domain_diameter;
  std::vector<double> radii;
  for (size_t i = 0; i < cps.size(); ++i) {
    if (static_cast<int>(i) == cp_index) continue;
    radii.push_back(distance(cps[i].position, cps[cp_index].position) + delta);
  }
  radii.push_back(domain_diameter);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  return radii;
}

Robustness RobustnessProfile::value_at(double radius) const {
  Robustness out = Robustness::unbounded_value();
  for (const ProfileLevel& level : levels) {
    if (level.radius <= radius) {
      out = level.value;
    } else {
      break;
    }
  }
  return out;
}

int RobustnessProfile::change_count() const {
  int changes = 0;
  for (size_t i = 1; i < levels.size(); ++i) {
    if (levels[i].value != levels[i - 1].value) ++changes;
  }
  return changes;
}

namespace {

// The value of a sampled level is the step-function value at the level
// radius: evaluate at the largest breakpoint not exceeding it. Below the
// first breakpoint the ball contains only the critical point itself and the
// value is unbounded regardless of the mesh extent.
Robustness level_value(const TriangleMesh& mesh, const FieldFrame& frame,
                       std::span<const CriticalPoint> cps, int cp_index,
                       std::span<const double> breakpoints, double radius) {
  double eval_radius = -1.0;
  for (double b : breakpoints) {
    if (b <= radius) {
      eval_radius = b;
    } else {
      break;
    }
  }
  if (eval_radius < 0.0) return Robustness::unbounded_value();
  return robustness_at_radius(mesh, frame, cps, cp_index, eval_radius);
}

Robustness profile_min(std::span<const ProfileLevel> levels) {
  Robustness out = Robustness::unbounded_value();
  for (const ProfileLevel& level : levels) out = std::min(out, level.value);
  return out;
}

}  // namespace

RobustnessProfile multilevel_robustness(const TriangleMesh& mesh, const FieldFrame& frame,
                                        std::span<const CriticalPoint> cps, int cp_index, int N) {
  if (N < 1) throw std::invalid_argument("multilevel_robustness: N must be >= 1");
  const auto breakpoints = partner_breakpoints(cps, cp_index, mesh.diameter);
  RobustnessProfile profile;
  profile.frame_index = frame.frame_index;
  profile.cp_id = cps[cp_index].id;
  for (int i = 0; i < N; ++i) {
    const auto spec = NeighborhoodSpec::at_level(cps[cp_index].position, mesh.diameter, i, N);
    profile.levels.push_back(
        {spec.radius, level_value(mesh, frame, cps, cp_index, breakpoints, spec.radius)});
  }
  profile.min_value = profile_min(profile.levels);
  return profile;
}

RobustnessProfile oracle_profile(const TriangleMesh& mesh, const FieldFrame& frame,
                                 std::span<const CriticalPoint> cps, int cp_index) {
  RobustnessProfile profile;
  profile.frame_index = frame.frame_index;
  profile.cp_id = cps[cp_index].id;
  for (double radius : partner_breakpoints(cps, cp_index, mesh.diameter)) {
    profile.levels.push_back({radius, robustness_at_radius(mesh, frame, cps, cp_index, radius)});
  }
  profile.min_value = profile_min(profile.levels);
  return profile;
}

TaskFarmResult run_task_farm(const TimeVaryingField& field,
                             const std::vector<std::vector<CriticalPoint>>& per_frame_cps, int N,
                             int workers, bool use_oracle) {
  struct Task {
    int frame;
    int cp;
    int level;
    double radius;     // reported level radius
    double eval_radius;  // breakpoint representative; < 0 means lone point
  };

  std::vector<Task> tasks;
  std::vector<RobustnessProfile> profiles;
  std::vector<std::vector<size_t>> profile_tasks;  // profile -> task ids, by level

  for (int f = 0; f < field.frame_count(); ++f) {
    const auto& cps = per_frame_cps[f];
    for (size_t c = 0; c < cps.size(); ++c) {
      const auto breakpoints =
          partner_breakpoints(cps, static_cast<int>(c), field.mesh.diameter);
      RobustnessProfile profile;
      profile.frame_index = f;
      profile.cp_id = cps[c].id;
      std::vector<size_t> ids;
      const int levels = use_oracle ? static_cast<int>(breakpoints.size()) : N;
      for (int i = 0; i < levels; ++i) {
        Task task;
        task.frame = f;
        task.cp = static_cast<int>(c);
        task.level = i;
        if (use_oracle) {
          task.radius = breakpoints[i];
          task.eval_radius = breakpoints[i];
        } else {
          task.radius =
              NeighborhoodSpec::at_level(cps[c].position, field.mesh.diameter, i, N).radius;
          task.eval_radius = -1.0;
          for (double b : breakpoints) {
            if (b <= task.radius) task.eval_radius = b;
          }
        }
        ids.push_back(tasks.size());
        tasks.push_back(task);
        profile.levels.push_back({task.radius, Robustness::unbounded_value()});
      }
      profiles.push_back(std::move(profile));
      profile_tasks.push_back(std::move(ids));
    }
  }

  std::vector<Robustness> results(tasks.size());
  std::vector<TaskTiming> timings(tasks.size());

  run_indexed_tasks(static_cast<int>(tasks.size()), workers, [&](int i) {
    const Task& task = tasks[i];
    const auto& cps = per_frame_cps[task.frame];
    const auto start = std::chrono::steady_clock::now();
    TaskTiming timing;
    timing.task_id = i;
    timing.frame_index = task.frame;
    timing.cp_id = cps[task.cp].id;
    timing.level = task.level;
    for (int attempt = 0; attempt < 2; ++attempt) {
      try {
        if (task.eval_radius < 0.0) {
          results[i] = Robustness::unbounded_value();
        } else {
          results[i] = robustness_at_radius(field.mesh, field.frames[task.frame], cps, task.cp,
                                            task.eval_radius);
        }
        timing.failed = false;
        break;
      } catch (...) {
        timing.failed = true;
      }
    }
    timing.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    timings[i] = timing;
  });

  for (size_t p = 0; p < profiles.size(); ++p) {
    for (size_t l = 0; l < profile_tasks[p].size(); ++l) {
      profiles[p].levels[l].value = results[profile_tasks[p][l]];
    }
    profiles[p].min_value = profile_min(profiles[p].levels);
  }
  return {std::move(profiles), std::move(timings)};
}

void write_robustness_csv(const std::filesystem::path& path,
                          std::span<const RobustnessProfile> profiles) {
  std::vector<std::vector<std::string>> rows;
  for (const RobustnessProfile& p : profiles) {
    for (size_t l = 0; l < p.levels.size(); ++l) {
      rows.push_back({std::to_string(p.frame_index), std::to_string(p.cp_id), std::to_string(l),
                      format_double(p.levels[l].radius),
                      format_double(robustness_to_double(p.levels[l].value))});
    }
  }
  write_csv(path, {"frame", "cp_id", "level", "radius", "robustness"}, rows);
}

std::vector<RobustnessProfile> read_robustness_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::string where = path.string();
  std::vector<RobustnessProfile> profiles;
  RobustnessProfile* current = nullptr;
  for (const auto& row : table.rows) {
    const int frame = static_cast<int>(parse_long(row[0], where));
    const int cp = static_cast<int>(parse_long(row[1], where));
    if (!current || current->frame_index != frame || current->cp_id != cp) {
      profiles.push_back({});
      current = &profiles.back();
      current->frame_index = frame;
      current->cp_id = cp;
    }
    current->levels.push_back(
        {parse_double(row[3], where), Robustness{parse_double(row[4], where)}});
  }
  for (RobustnessProfile& p : profiles) p.min_value = profile_min(p.levels);
  return profiles;
}

void write_timing_csv(const std::filesystem::path& path, std::span<const TaskTiming> timings) {
  std::vector<std::vector<std::string>> rows;
  for (const TaskTiming& t : timings) {
    rows.push_back({std::to_string(t.task_id), std::to_string(t.cp_id), std::to_string(t.level),
                    format_double(t.seconds)});
  }
  write_csv(path, {"task_id", "cp_id", "level", "seconds"}, rows);
}

}  // namespace vfr
