#pragma once

#include <cstddef>
#include <functional>

namespace ssmf {

// Thread count resolution: requested > 0 wins, otherwise the SSMF_THREADS
// environment variable, otherwise hardware concurrency.
int resolve_threads(int requested);

// Runs body(i) for i in [0, n) on a static partition of the index range.
// Work must write results into per-index slots; the caller then reduces in
// index order, which keeps outputs independent of the thread count.
// The first exception thrown by any worker is rethrown.
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& body);

}  // namespace ssmf
