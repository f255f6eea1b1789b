#pragma once

#include <cstddef>
#include <functional>

namespace phidual {

// Worker count: PHIDUAL_THREADS if set and positive, otherwise the value
// installed by set_worker_count, otherwise hardware concurrency.
std::size_t worker_count();
void set_worker_count(std::size_t workers);

// Runs body(begin, end) over contiguous chunks of [0, n). Chunks are fixed by
// n and the worker count, so any per-chunk results reduced in chunk order are
// deterministic.
void parallel_chunks(std::size_t n, const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace phidual
