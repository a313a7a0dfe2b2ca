// Compares the serial reference path (workers=1) against the OpenMP task
// farm on a synthetic robustness workload and checks that both produce
// identical profiles.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "vfr/multilevel.hpp"
#include "vfr/synth.hpp"
#include "vfr/task_pool.hpp"

namespace {

double now_seconds() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

bool profiles_equal(const std::vector<vfr::RobustnessProfile>& a,
                    const std::vector<vfr::RobustnessProfile>& b) {
  if (a.size() != b.size()) return false;
  for (size_t i = 0; i < a.size(); ++i) {
    if (a[i].levels.size() != b[i].levels.size()) return false;
    for (size_t l = 0; l < a[i].levels.size(); ++l) {
      if (a[i].levels[l].radius != b[i].levels[l].radius) return false;
      if (a[i].levels[l].value != b[i].levels[l].value) return false;
    }
  }
  return true;
}

}  // namespace

int main(int argc, char** argv) {
  int resolution = 96;
  int n_elements = 12;
  int levels = 50;
  if (argc > 1) resolution = std::atoi(argv[1]);
  if (argc > 2) n_elements = std::atoi(argv[2]);
  if (argc > 3) levels = std::atoi(argv[3]);

  std::vector<vfr::FlowElement> elements;
  for (int i = 0; i < n_elements; ++i) {
    const double x = 0.12 + 0.76 * ((i * 37) % 97) / 96.0;
    const double y = 0.12 + 0.76 * ((i * 61 + 17) % 89) / 88.0;
    const auto kind = (i % 2 == 0) ? vfr::ElementKind::Center : vfr::ElementKind::Saddle;
    elements.push_back(vfr::FlowElement::steady(kind, {x, y}, 1.0, 0.05));
  }
  const std::vector<double> times{0.0};
  const auto field =
      vfr::render(elements, vfr::grid_mesh(resolution, resolution, {{0, 0}, {1, 1}}), times);
  const auto cps = vfr::extract_critical_points(field.frames[0], field.mesh);
  std::printf("mesh: %d triangles, %zu critical points, %d levels => %zu tasks\n",
              field.mesh.triangle_count(), cps.size(), levels, cps.size() * levels);

  std::vector<std::vector<vfr::CriticalPoint>> per_frame{cps};

  const double t0 = now_seconds();
  const auto serial = vfr::run_task_farm(field, per_frame, levels, 1);
  const double serial_seconds = now_seconds() - t0;
  std::printf("%-22s %8.3f s\n", "serial reference", serial_seconds);

  for (int workers : {2, 4, vfr::default_workers()}) {
    const double t1 = now_seconds();
    const auto parallel = vfr::run_task_farm(field, per_frame, levels, workers);
    const double seconds = now_seconds() - t1;
    const bool same = profiles_equal(serial.profiles, parallel.profiles);
    std::printf("openmp workers=%-8d %8.3f s  speedup %.2fx  results %s\n", workers, seconds,
                serial_seconds / seconds, same ? "identical" : "DIFFER");
    if (!same) return 1;
  }
  return 0;
}
