#pragma once

#include <cstddef>
#include <exception>
#include <functional>

namespace fdrlab {

// Worker cap: FDRLAB_THREADS when set to a positive integer, otherwise the
// hardware concurrency (at least 1).
std::size_t worker_count();

// Calls body(i) for i in [0, count) across worker_count() threads. Work is
// split into contiguous blocks, so results written to slot i are independent
// of scheduling. The first exception (lowest index) is rethrown.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace fdrlab
