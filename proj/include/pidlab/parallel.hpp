#pragma once

#include <cstddef>
#include <functional>

namespace pidlab {

/// Worker count: PIDLAB_THREADS if set and positive, otherwise the hardware
/// concurrency (at least 1).
size_t worker_count();

/// Runs body(i) for i in [0, n). Each index is handled exactly once; callers
/// write results into per-index slots and reduce afterwards, so the outcome
/// does not depend on scheduling. The first exception is rethrown.
void parallel_for(size_t n, const std::function<void(size_t)>& body);

}  // namespace pidlab
