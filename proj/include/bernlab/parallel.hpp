#pragma once

#include <cstdint>
#include <functional>

namespace bernlab {

// Worker count from BERNLAB_THREADS, else the hardware concurrency.
unsigned thread_count();

// Runs fn(i) for i in [0, n) on a command-scoped pool. fn must only write to
// slots it owns; results are reduced by the caller in index order.
void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn);

}  // namespace bernlab
