#pragma once

#include <cstddef>
#include <functional>

namespace pdmpstop {

// Work is always split into this many index ranges, independent of the thread
// count, so chunk-ordered reductions give byte-identical results under any
// --threads setting.
inline constexpr std::size_t kReductionChunks = 64;

// Process-wide thread cap; 0 means hardware concurrency.
void set_max_threads(int n);
int max_threads();

// Runs fn(chunk, begin, end) over kReductionChunks contiguous ranges covering
// [0, total). Chunks are distributed over a small thread pool; fn must only
// write chunk-local state. Exceptions are rethrown on the calling thread.
void parallel_chunks(std::size_t total, const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

}  // namespace pdmpstop
