#pragma once

#include <cstddef>
#include <functional>

namespace dahaze {

// Runs body(i) for every i in [0, count) on up to `workers` threads. Each
// index is visited exactly once; callers write results into per-index slots
// so the outcome does not depend on scheduling. workers <= 1 runs inline.
// The first exception thrown by a body is rethrown after all threads join.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& body);

}  // namespace dahaze
