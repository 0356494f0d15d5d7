#pragma once

#include <cstddef>
#include <functional>

namespace lhy {

// Worker count: LHYLAB_THREADS if set (>= 1), else hardware concurrency.
int worker_count();
void set_worker_count(int n);  // 0 restores the default

// Calls body(i) for i in [0, n) on up to worker_count() threads. Items are
// handed out dynamically; callers write results into per-index slots so the
// outcome is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace lhy
