#pragma once

#include <cstddef>
#include <functional>

namespace towers {

// Worker threads to use: LIEB_TOWERS_THREADS if set and positive, otherwise
// the hardware concurrency.
int worker_count();

// Runs body(i) for i in [0, n) on up to worker_count() threads. Exceptions
// thrown by the body are rethrown (the one with the lowest index wins).
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace towers
