#pragma once

#include <cstddef>
#include <functional>

namespace colorizer {

// Worker count: COLORIZER_THREADS when set to a positive integer, else hardware concurrency.
int thread_count();

// Splits [0, count) into contiguous chunks, one per worker. Each index is visited exactly once,
// so callers that write disjoint outputs per index stay deterministic.
void parallel_for(std::size_t count, const std::function<void(std::size_t begin, std::size_t end)>& body,
                  std::size_t min_chunk = 1);

}  // namespace colorizer
