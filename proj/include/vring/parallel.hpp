#pragma once

#include <cstddef>
#include <functional>

namespace vring {

/// Process-wide default worker count used by grid evaluations (>= 1).
unsigned default_workers();
void set_default_workers(unsigned n);

/// Calls body(i) for i in [0, n) on `workers` threads. Each index is handled
/// exactly once; callers write into per-index slots and reduce afterwards in
/// index order, so results do not depend on the worker count.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body,
                  unsigned workers = 0);

}  // namespace vring
