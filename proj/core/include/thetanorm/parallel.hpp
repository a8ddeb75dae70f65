#pragma once

#include <cstddef>
#include <functional>

namespace thetanorm {

/// std::thread::hardware_concurrency(), at least 1.
int default_thread_count();

/// Calls body(i) for i in [0, count) on up to `threads` workers. Callers
/// write results into slots indexed by i, so output order never depends on
/// scheduling. The first exception thrown by any task is rethrown.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& body);

}  // namespace thetanorm
