#pragma once

#include <cstddef>
#include <functional>

namespace entrocode {

/// Worker count: ENTROCODE_THREADS if set and positive, else the hardware
/// concurrency.
unsigned worker_count();

/// Runs body(i) for i in [0, count) on up to worker_count() threads. Each
/// index runs exactly once; callers write results by index.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

}  // namespace entrocode
