#pragma once

#include <cstddef>
#include <functional>

namespace diab {

// Runs fn(0..n-1) on up to `jobs` worker threads. jobs <= 0 means use the
// hardware thread count. Tasks must write only to their own slots; the
// first exception thrown by any task is rethrown after all workers join.
void parallel_for(size_t n, int jobs, const std::function<void(size_t)>& fn);

int resolve_jobs(int jobs);

}  // namespace diab
