#pragma once

#include <cstddef>
#include <functional>

namespace cornex {

/// Worker count used by grid loops. Capped by CORNEX_MAX_THREADS.
int worker_count();
void set_worker_count(int n);

/// Runs fn(begin, end) over contiguous chunks of [0, n). Chunking depends only
/// on n and the worker count, and each index is written by exactly one chunk.
void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn);

}  // namespace cornex
