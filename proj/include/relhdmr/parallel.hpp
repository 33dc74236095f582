#pragma once

#include <cstddef>
#include <functional>

namespace relhdmr {

/// Worker cap: RELHDMR_THREADS when set to a positive integer, otherwise the
/// hardware concurrency (at least 1).
std::size_t worker_threads();

/// Runs task(k) for k in [0, n) on up to `threads` workers (0 = worker_threads()).
/// Tasks are claimed dynamically; the first exception thrown is rethrown.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& task, std::size_t threads = 0);

}  // namespace relhdmr
