#pragma once

#include <cstddef>
#include <functional>

namespace greenkernel {

// Worker count: hardware concurrency, capped by GREENKERNEL_THREADS when set.
unsigned thread_count();

// Runs body(i) for i in [0, n) on up to thread_count() threads. Each index is
// visited exactly once; callers write results into per-index slots so that
// reductions stay deterministic.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace greenkernel
