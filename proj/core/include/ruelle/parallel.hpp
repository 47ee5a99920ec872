#pragma once

#include <cstddef>
#include <functional>

namespace ruelle {

/// Worker count: RUELLE_LAB_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace ruelle
