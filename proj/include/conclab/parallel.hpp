#pragma once

#include <cstdint>
#include <functional>

namespace conclab {

/// Worker cap: hardware concurrency, clamped by the CONCLAB_THREADS
/// environment variable when set. Always at least 1.
int max_threads();

/// Fixed chunk size used by the sampling loops. Chunking is independent of
/// the thread count, so per-chunk derived random streams give results that do
/// not depend on the parallelism level.
inline constexpr std::int64_t kDefaultChunk = 4096;

/// Runs fn(chunk_index, begin, end) over the index range [0, n), split into
/// chunks of `chunk` items. Chunks may run on different threads; callers must
/// write only to disjoint state per chunk and reduce afterwards in chunk
/// order.
void parallel_chunks(std::int64_t n, std::int64_t chunk,
                     const std::function<void(std::int64_t, std::int64_t, std::int64_t)>& fn);

inline std::int64_t chunk_count(std::int64_t n, std::int64_t chunk) {
    return (n + chunk - 1) / chunk;
}

}  // namespace conclab
