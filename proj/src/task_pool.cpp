#include "vfr/task_pool.hpp"

#include <thread>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vfr {

void run_indexed_tasks(int count, int workers, const std::function<void(int)>& fn) {
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
  for (int i = 0; i < count; ++i) fn(i);
#else
  for (int i = 0; i < count; ++i) fn(i);
#endif
}

int default_workers() {
  const unsigned n = std::thread::hardware_concurrency();
  return n == 0 ? 1 : static_cast<int>(n);
}

}  // namespace vfr
