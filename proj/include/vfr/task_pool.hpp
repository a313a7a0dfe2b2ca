#pragma once

#include <functional>

namespace vfr {

/// Runs fn(0) .. fn(count-1). workers <= 1 executes the plain serial loop
/// (the reference path used by determinism tests); otherwise the tasks run
/// under OpenMP with dynamic scheduling. Tasks must write only to their own
/// output slots, which makes results independent of the schedule.
void run_indexed_tasks(int count, int workers, const std::function<void(int)>& fn);

/// Logical core count, the default worker setting.
int default_workers();

}  // namespace vfr
