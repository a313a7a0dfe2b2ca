#include "vfr/tracking.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <tuple>

#include <json.hpp>

#include "vfr/errors.hpp"
#include "vfr/sos.hpp"
#include "vfr/task_pool.hpp"

namespace vfr {

namespace {

using FaceKey = std::array<SpacetimeId, 3>;

struct FaceRef {
  FaceKey key;
  int tet;
  int slot;
};

struct Crossing {
  bool claimed = false;
  SpacetimePoint pos;
  int slice = -1;
};

FaceKey tet_face(const SpacetimeTet& tet, int slot) {
  FaceKey key;
  int w = 0;
  for (int k = 0; k < 4; ++k) {
    if (k != slot) key[w++] = tet.gids[k];
  }
  std::sort(key.begin(), key.end());
  return key;
}

std::tuple<double, double, double, long long> node_sort_key(const SpacetimePoint& p, int id) {
  return {p.t, p.x, p.y, id};
}

}  // namespace

std::vector<Trajectory> extract_trajectories(const SpacetimeMesh& st, int workers) {
  const int n_tets = static_cast<int>(st.tets.size());

  // Unique faces, ordered by key. Both tets sharing a face test the same
  // sorted vertex triple, so claims and crossing positions agree bitwise.
  std::vector<FaceRef> refs;
  refs.reserve(static_cast<size_t>(n_tets) * 4);
  for (int t = 0; t < n_tets; ++t) {
    for (int slot = 0; slot < 4; ++slot) refs.push_back({tet_face(st.tets[t], slot), t, slot});
  }
  std::sort(refs.begin(), refs.end(), [](const FaceRef& a, const FaceRef& b) {
    if (a.key != b.key) return a.key < b.key;
    return std::tie(a.tet, a.slot) < std::tie(b.tet, b.slot);
  });

  std::vector<FaceKey> face_keys;
  std::vector<std::array<int, 4>> tet_faces(n_tets);
  for (size_t i = 0; i < refs.size(); ++i) {
    if (i == 0 || refs[i].key != refs[i - 1].key) face_keys.push_back(refs[i].key);
    tet_faces[refs[i].tet][refs[i].slot] = static_cast<int>(face_keys.size()) - 1;
  }

  const int n_faces = static_cast<int>(face_keys.size());
  std::vector<Crossing> crossings(n_faces);
  run_indexed_tasks(n_faces, workers, [&](int f) {
    const FaceKey& key = face_keys[f];
    const std::array<Vec2, 3> values{st.value(key[0]), st.value(key[1]), st.value(key[2])};
    const FaceZero z = face_zero({key[0], key[1], key[2]}, values);
    if (!z.claimed) return;
    Crossing c;
    c.claimed = true;
    for (int k = 0; k < 3; ++k) {
      const SpacetimePoint p = st.point(key[k]);
      c.pos.x += z.bary[k] * p.x;
      c.pos.y += z.bary[k] * p.y;
      c.pos.t += z.bary[k] * p.t;
    }
    const int frame = st.frame_of(key[0]);
    if (st.frame_of(key[1]) == frame && st.frame_of(key[2]) == frame) c.slice = frame;
    crossings[f] = c;
  });

  // Segments: a generic tet is crossed by the zero line through exactly two
  // faces. Three or more crossings (degenerate) meet at a junction node.
  struct Node {
    SpacetimePoint pos;
    int slice = -1;
  };
  std::vector<Node> junction_nodes;
  std::vector<std::array<int, 2>> segments;
  for (int t = 0; t < n_tets; ++t) {
    std::array<int, 4> hit{};
    int n_hit = 0;
    for (int slot = 0; slot < 4; ++slot) {
      const int f = tet_faces[t][slot];
      if (crossings[f].claimed) hit[n_hit++] = f;
    }
    if (n_hit == 2) {
      segments.push_back({hit[0], hit[1]});
    } else if (n_hit >= 3) {
      Node j;
      for (int k = 0; k < n_hit; ++k) {
        j.pos.x += crossings[hit[k]].pos.x / n_hit;
        j.pos.y += crossings[hit[k]].pos.y / n_hit;
        j.pos.t += crossings[hit[k]].pos.t / n_hit;
      }
      const int jid = n_faces + static_cast<int>(junction_nodes.size());
      junction_nodes.push_back(j);
      for (int k = 0; k < n_hit; ++k) segments.push_back({hit[k], jid});
    }
  }

  const int n_nodes = n_faces + static_cast<int>(junction_nodes.size());
  std::vector<std::vector<std::pair<int, int>>> adjacency(n_nodes);  // (neighbor, segment)
  for (size_t s = 0; s < segments.size(); ++s) {
    adjacency[segments[s][0]].emplace_back(segments[s][1], static_cast<int>(s));
    adjacency[segments[s][1]].emplace_back(segments[s][0], static_cast<int>(s));
  }

  auto node_pos = [&](int n) -> SpacetimePoint {
    return n < n_faces ? crossings[n].pos : junction_nodes[n - n_faces].pos;
  };
  auto node_slice = [&](int n) -> int {
    return n < n_faces ? crossings[n].slice : junction_nodes[n - n_faces].slice;
  };

  std::vector<char> seg_visited(segments.size(), 0);
  std::vector<std::vector<int>> walks;

  auto walk = [&](int start, int seg) {
    std::vector<int> nodes{start};
    int cur = start;
    int via = seg;
    while (true) {
      seg_visited[via] = 1;
      const auto& s = segments[via];
      cur = (s[0] == cur) ? s[1] : s[0];
      nodes.push_back(cur);
      if (adjacency[cur].size() != 2) break;
      int next = -1;
      for (const auto& [nbr, sid] : adjacency[cur]) {
        if (!seg_visited[sid]) next = sid;
      }
      if (next < 0) break;  // closed loop or already-consumed continuation
      via = next;
    }
    walks.push_back(std::move(nodes));
  };

  for (int n = 0; n < n_nodes; ++n) {
    if (adjacency[n].empty() || adjacency[n].size() == 2) continue;
    for (const auto& [nbr, sid] : adjacency[n]) {
      if (!seg_visited[sid]) walk(n, sid);
    }
  }
  for (size_t s = 0; s < segments.size(); ++s) {
    if (!seg_visited[s]) walk(segments[s][0], static_cast<int>(s));  // pure cycle
  }

  // Canonical parameterization: open paths start at the lower (t, x, y)
  // endpoint; cycles are rotated to the lowest node and walk toward the lower
  // neighbor.
  for (auto& nodes : walks) {
    const bool is_cycle = nodes.size() > 2 && nodes.front() == nodes.back();
    if (is_cycle) {
      nodes.pop_back();
      size_t lowest = 0;
      for (size_t i = 1; i < nodes.size(); ++i) {
        if (node_sort_key(node_pos(nodes[i]), nodes[i]) <
            node_sort_key(node_pos(nodes[lowest]), nodes[lowest])) {
          lowest = i;
        }
      }
      std::rotate(nodes.begin(), nodes.begin() + lowest, nodes.end());
      const int next = nodes[1];
      const int prev = nodes.back();
      if (node_sort_key(node_pos(prev), prev) < node_sort_key(node_pos(next), next)) {
        std::reverse(nodes.begin() + 1, nodes.end());
      }
    } else if (node_sort_key(node_pos(nodes.back()), nodes.back()) <
               node_sort_key(node_pos(nodes.front()), nodes.front())) {
      std::reverse(nodes.begin(), nodes.end());
    }
  }

  std::sort(walks.begin(), walks.end(), [&](const std::vector<int>& a, const std::vector<int>& b) {
    const size_t len = std::min(a.size(), b.size());
    for (size_t i = 0; i < len; ++i) {
      const auto ka = node_sort_key(node_pos(a[i]), a[i]);
      const auto kb = node_sort_key(node_pos(b[i]), b[i]);
      if (ka != kb) return ka < kb;
    }
    return a.size() < b.size();
  });

  std::vector<Trajectory> out;
  for (const auto& nodes : walks) {
    Trajectory traj;
    traj.id = static_cast<int>(out.size());
    for (size_t i = 0; i < nodes.size(); ++i) {
      TrajectoryNode tn;
      tn.index = static_cast<int>(i);
      const SpacetimePoint p = node_pos(nodes[i]);
      tn.x = p.x;
      tn.y = p.y;
      tn.t = p.t;
      if (const int slice = node_slice(nodes[i]); slice >= 0) tn.slice = slice;
      traj.nodes.push_back(tn);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

void slice_annotate(Trajectory& traj, const std::vector<std::vector<CriticalPoint>>& per_frame_cps,
                    const std::vector<std::vector<Robustness>>& per_frame_minR,
                    double domain_diameter) {
  const double tol = 1e-6 * domain_diameter;
  std::vector<int> annotated;

  for (TrajectoryNode& node : traj.nodes) {
    if (!node.slice) continue;
    const int frame = *node.slice;
    if (frame < 0 || frame >= static_cast<int>(per_frame_cps.size())) continue;
    const Vec2 p{node.x, node.y};
    int best = -1;
    double best_d = tol;
    for (const CriticalPoint& cp : per_frame_cps[frame]) {
      const double d = distance(cp.position, p);
      if (d <= best_d) {
        best_d = d;
        best = cp.id;
      }
    }
    if (best < 0) {
      std::cerr << "warning: trajectory " << traj.id << ": slice node at frame " << frame
                << " has no matching critical point within tolerance\n";
      continue;
    }
    node.degree = per_frame_cps[frame][best].degree;
    if (!per_frame_minR.empty()) node.min_robustness = per_frame_minR[frame][best];
    annotated.push_back(node.index);
  }
  if (annotated.empty()) return;

  for (TrajectoryNode& node : traj.nodes) {
    if (node.slice || node.degree) continue;
    int best = annotated.front();
    for (int idx : annotated) {
      const int d_new = std::abs(idx - node.index);
      const int d_best = std::abs(best - node.index);
      if (d_new < d_best) {
        best = idx;
      } else if (d_new == d_best && idx != best) {
        const double t_new = std::abs(traj.nodes[idx].t - node.t);
        const double t_best = std::abs(traj.nodes[best].t - node.t);
        if (t_new < t_best || (t_new == t_best && idx < best)) best = idx;
      }
    }
    node.degree = traj.nodes[best].degree;
    node.min_robustness = traj.nodes[best].min_robustness;
  }
}

namespace {

nlohmann::json robustness_to_json(const Robustness& r) {
  if (r.unbounded()) return "inf";
  return r.value;
}

Robustness robustness_from_json(const nlohmann::json& j) {
  if (j.is_string()) return Robustness::unbounded_value();
  return Robustness{j.get<double>()};
}

}  // namespace

void write_trajectories_json(const std::filesystem::path& path,
                             const std::vector<Trajectory>& trajectories) {
  nlohmann::json out = nlohmann::json::array();
  for (const Trajectory& traj : trajectories) {
    nlohmann::json tj;
    tj["id"] = traj.id;
    if (traj.provenance.original()) {
      tj["provenance"] = "original";
    } else {
      nlohmann::json pj;
      pj["source"] = traj.provenance.source;
      pj["ranges"] = traj.provenance.ranges;
      tj["provenance"] = pj;
    }
    nlohmann::json nodes = nlohmann::json::array();
    for (const TrajectoryNode& n : traj.nodes) {
      nlohmann::json nj;
      nj["index"] = n.index;
      nj["x"] = n.x;
      nj["y"] = n.y;
      nj["t"] = n.t;
      if (n.slice) nj["slice"] = *n.slice;
      if (n.degree) nj["degree"] = *n.degree;
      if (n.min_robustness) nj["minR"] = robustness_to_json(*n.min_robustness);
      nodes.push_back(std::move(nj));
    }
    tj["nodes"] = std::move(nodes);
    out.push_back(std::move(tj));
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot write " + path.string());
  f << out.dump() << '\n';
}

std::vector<Trajectory> read_trajectories_json(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw DataError("missing file: " + path.string());
  nlohmann::json j;
  try {
    f >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw DataError(path.string() + ": " + e.what());
  }
  std::vector<Trajectory> out;
  for (const auto& tj : j) {
    Trajectory traj;
    traj.id = tj.at("id").get<int>();
    const auto& pj = tj.at("provenance");
    if (pj.is_object()) {
      traj.provenance.source = pj.at("source").get<int>();
      for (const auto& r : pj.at("ranges")) {
        traj.provenance.ranges.push_back({r[0].get<int>(), r[1].get<int>()});
      }
    }
    for (const auto& nj : tj.at("nodes")) {
      TrajectoryNode n;
      n.index = nj.at("index").get<int>();
      n.x = nj.at("x").get<double>();
      n.y = nj.at("y").get<double>();
      n.t = nj.at("t").get<double>();
      if (nj.contains("slice")) n.slice = nj.at("slice").get<int>();
      if (nj.contains("degree")) n.degree = nj.at("degree").get<int>();
      if (nj.contains("minR")) n.min_robustness = robustness_from_json(nj.at("minR"));
      traj.nodes.push_back(n);
    }
    out.push_back(std::move(traj));
  }
  return out;
}

}  // namespace vfr
