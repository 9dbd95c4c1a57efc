#ifndef LERAY_PARALLEL_HPP
#define LERAY_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

#include "leray/complexvec.hpp"

namespace leray {

/// Runs fn(i) for i in [0, count) across `workers` threads. fn must only
/// write to state owned by index i.
void parallel_for(std::size_t count, int workers, const std::function<void(std::size_t)>& fn);

/// Accumulates `width` complex outputs per node over `count` nodes.
/// Nodes are summed within fixed chunks in index order and the chunk sums
/// are pairwise-reduced, so the result is bit-identical for any worker count.
/// fn(i, out) must add node i's contributions into out[0..width).
std::vector<cplx> parallel_accumulate(std::size_t count, std::size_t width, int workers,
                                      const std::function<void(std::size_t, cplx*)>& fn);

}  // namespace leray

#endif
