#pragma once

#include <functional>

namespace mapcalc {

/// Worker count: MAPCALC_THREADS when set to a positive integer, otherwise
/// the hardware concurrency.
int thread_count();

/// Runs body(i) for i in [0, n) on up to thread_count() threads. The first
/// exception thrown by any call is rethrown after all workers finish.
void parallel_for(int n, const std::function<void(int)>& body);

}  // namespace mapcalc
