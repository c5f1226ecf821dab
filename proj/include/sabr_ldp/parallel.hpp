#pragma once

#include <cstddef>
#include <functional>

namespace sabr_ldp {

/// Worker count: SABR_LDP_THREADS if set to a positive integer, else the hardware concurrency.
std::size_t worker_count();

/// Calls body(i) for i in [0, n) across worker threads. Each index is visited exactly
/// once; the first exception thrown by any call is rethrown after all workers finish.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body);

}  // namespace sabr_ldp
