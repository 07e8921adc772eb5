#pragma once

#include <cstddef>
#include <functional>

namespace stadion {

// Default worker count: STADION_THREADS env var if set, else hardware concurrency.
std::size_t default_thread_count();

// Runs body(i) for i in [0, n) on `threads` workers. Work items are claimed from
// a shared atomic counter; callers obtain determinism by writing results into
// preallocated slots indexed by i and reducing serially afterwards.
void parallel_for(std::size_t n, std::size_t threads, const std::function<void(std::size_t)>& body);

}  // namespace stadion
