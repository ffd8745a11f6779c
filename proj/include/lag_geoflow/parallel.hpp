#pragma once

// Minimal fork-join helper. Work items are independent; results are written
// into caller-owned slots, so reductions stay in a fixed order.

#include <cstddef>
#include <functional>

namespace lag_geoflow {

// 0 restores the default (hardware concurrency).
void set_thread_count(int threads);
int thread_count();

// Runs fn(i) for i in [begin, end). The exception of the lowest failing index
// is rethrown after all workers join.
void parallel_for(int begin, int end, const std::function<void(int)>& fn);

}  // namespace lag_geoflow
