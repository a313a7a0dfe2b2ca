#include "support/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

namespace vfr::testing {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct GridUnionFind {
  std::vector<int> parent;
  std::vector<int> degree;
  std::vector<std::vector<int>> cps;  // cp indices per root

  explicit GridUnionFind(int n) : parent(n), degree(n, 0), cps(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int i) {
    while (i != parent[i]) {
      parent[i] = parent[parent[i]];
      i = parent[i];
    }
    return i;
  }
};

}  // namespace

GridOracleResult grid_robustness_oracle(const TriangleMesh& mesh, const FieldFrame& frame,
                                        std::span<const CriticalPoint> cps, int grid_n) {
  const MeshLocator locator(mesh);
  const BBox box = mesh.bounds();
  const int n = grid_n;
  const double hx = box.width() / (n - 1);
  const double hy = box.height() / (n - 1);

  std::vector<double> value(static_cast<size_t>(n) * n, kInf);
  for (int j = 0; j < n; ++j) {
    for (int i = 0; i < n; ++i) {
      const Vec2 p{box.lo.x + hx * i, box.lo.y + hy * j};
      if (auto hit = locator.locate(p)) {
        const auto& [t, w] = *hit;
        Vec2 f;
        for (int k = 0; k < 3; ++k) f += frame.vectors[mesh.triangles[t][k]] * w[k];
        value[static_cast<size_t>(j) * n + i] = norm(f);
      }
    }
  }

  // Seed critical point degrees at their nearest grid nodes.
  std::vector<int> node_degree(value.size(), 0);
  std::vector<std::vector<int>> node_cps(value.size());
  for (size_t c = 0; c < cps.size(); ++c) {
    const int i =
        std::clamp(static_cast<int>(std::round((cps[c].position.x - box.lo.x) / hx)), 0, n - 1);
    const int j =
        std::clamp(static_cast<int>(std::round((cps[c].position.y - box.lo.y) / hy)), 0, n - 1);
    const size_t node = static_cast<size_t>(j) * n + i;
    node_degree[node] += cps[c].degree;
    node_cps[node].push_back(static_cast<int>(c));
  }

  std::vector<int> order;
  order.reserve(value.size());
  for (size_t i = 0; i < value.size(); ++i) {
    if (std::isfinite(value[i])) order.push_back(static_cast<int>(i));
  }
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (value[a] != value[b]) return value[a] < value[b];
    return a < b;
  });

  GridOracleResult result;
  result.robustness.assign(cps.size(), kInf);

  GridUnionFind uf(static_cast<int>(value.size()));
  std::vector<char> processed(value.size(), 0);

  auto resolve_if_cancelled = [&](int root, double level) {
    if (uf.degree[root] != 0) return;
    for (int c : uf.cps[root]) {
      if (std::isinf(result.robustness[c])) result.robustness[c] = level;
    }
  };

  for (int u : order) {
    processed[u] = 1;
    uf.degree[u] = node_degree[u];
    uf.cps[u] = node_cps[u];
    const int ui = u % n;
    const int uj = u / n;
    for (int dj = -1; dj <= 1; ++dj) {
      for (int di = -1; di <= 1; ++di) {
        if (di == 0 && dj == 0) continue;
        const int vi = ui + di;
        const int vj = uj + dj;
        if (vi < 0 || vi >= n || vj < 0 || vj >= n) continue;
        const int v = vj * n + vi;
        if (!processed[v]) continue;
        int ru = uf.find(u);
        int rv = uf.find(v);
        if (ru == rv) continue;
        // Record pairwise merge levels between the two components' cps.
        for (int a : uf.cps[ru]) {
          for (int b : uf.cps[rv]) {
            const auto key = std::minmax(a, b);
            result.merge_values.emplace(std::pair<int, int>(key.first, key.second), value[u]);
          }
        }
        uf.parent[rv] = ru;
        uf.degree[ru] += uf.degree[rv];
        uf.cps[ru].insert(uf.cps[ru].end(), uf.cps[rv].begin(), uf.cps[rv].end());
        uf.cps[rv].clear();
      }
    }
    resolve_if_cancelled(uf.find(u), value[u]);
  }
  return result;
}

int winding_oracle(const std::function<Vec2(Vec2)>& field, Vec2 center, double radius,
                   int samples) {
  double total = 0.0;
  Vec2 prev = field({center.x + radius, center.y});
  for (int s = 1; s <= samples; ++s) {
    const double a = 2.0 * std::numbers::pi * s / samples;
    const Vec2 cur = field({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
    total += std::atan2(cross(prev, cur), dot(prev, cur));
    prev = cur;
  }
  return static_cast<int>(std::round(total / (2.0 * std::numbers::pi)));
}

int kde_mode_oracle(std::span<const double> values, double sigma, int fine_n) {
  std::vector<double> density(fine_n);
  for (int i = 0; i < fine_n; ++i) {
    const double g = static_cast<double>(i) / (fine_n - 1);
    double d = 0.0;
    for (double v : values) d += std::exp(-(g - v) * (g - v) / (2.0 * sigma * sigma));
    density[i] = d;
  }
  std::vector<std::pair<int, double>> runs;
  for (int i = 0; i < fine_n; ++i) {
    if (runs.empty() || density[i] != runs.back().second) runs.emplace_back(i, density[i]);
  }
  int minima = 0;
  for (size_t r = 1; r + 1 < runs.size(); ++r) {
    if (runs[r].second < runs[r - 1].second && runs[r].second < runs[r + 1].second) ++minima;
  }
  return minima + 1;
}

double max_edge_gradient(const TriangleMesh& mesh, std::span<const double> f0) {
  double best = 0.0;
  for (const auto& [u, v] : mesh.unique_edges()) {
    const double len = distance(mesh.vertices[u], mesh.vertices[v]);
    if (len > 0.0) best = std::max(best, std::abs(f0[u] - f0[v]) / len);
  }
  return best;
}

std::vector<Vec2> circle_loop(Vec2 center, double radius, int points) {
  std::vector<Vec2> loop;
  loop.reserve(points);
  for (int s = 0; s < points; ++s) {
    const double a = 2.0 * std::numbers::pi * s / points;
    loop.push_back({center.x + radius * std::cos(a), center.y + radius * std::sin(a)});
  }
  return loop;
}

}  // namespace vfr::testing
