#pragma once

#include <cstddef>
#include <functional>

namespace gramentropy {

/// Worker count: `requested` if nonzero, else GRAMENTROPY_THREADS if set, else
/// hardware concurrency; always capped by GRAMENTROPY_THREADS and >= 1.
unsigned worker_count(unsigned requested = 0);

/// Calls body(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to per-index slots; the first exception thrown is rethrown
/// after all workers finish.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace gramentropy
