#pragma once

#include <cstddef>
#include <functional>

namespace hvi {

/// Worker cap from the HVI_THREADS environment variable (default 1).
std::size_t thread_count();

/// Runs fn(i) for i in [0, n) on up to thread_count() threads. Each index
/// must write only its own output slot; results are then independent of the
/// thread count. The first exception thrown is rethrown after all workers
/// finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

}  // namespace hvi
