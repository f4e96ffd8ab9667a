/// @file parallel.hpp
/// @brief Deterministic data-parallel sweep helper.
///
/// Work items are indexed and results land in preallocated slots, so the
/// output is byte-identical for any thread count. The thread count comes from
/// HEATLAB_THREADS when set (sweeps re-read it on every call), else from the
/// hardware concurrency.
#pragma once

#include <cstddef>
#include <functional>

namespace heatlab {

/// Resolve the worker count: HEATLAB_THREADS env var if set and valid, else
/// std::thread::hardware_concurrency(), clamped to [1, 64].
int worker_count();

/// Run f(i) for i in [0, n). f must only write to per-index state.
/// Reductions belong in a second, sequential pass over the indexed results.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& f);

}  // namespace heatlab
