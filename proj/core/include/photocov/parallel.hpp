#pragma once

#include <cstddef>
#include <functional>

namespace photocov {

/// Worker cap for parallel_for: the PHOTOCOV_THREADS environment variable
/// when set (0 = auto), otherwise the hardware concurrency.
int max_worker_threads();

/// Runs fn(index) for index in [0, count) across worker threads. Callers
/// keep determinism by writing to per-index slots and reducing in index
/// order afterwards.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace photocov
