#pragma once

#include <cstddef>
#include <functional>

namespace varcalc {

// Number of worker threads to use: min(hardware, VARCALC_THREADS).  The
// environment variable is re-read on every call so one process can compare
// runs under different caps.
int thread_cap();

// Runs fn(begin, end) over a partition of [0, n).  Every index is handled by
// exactly one invocation and all writes must go to disjoint slots, so results
// are identical for any thread count.  Reductions belong after the join.
void parallel_chunks(std::size_t n,
                     const std::function<void(std::size_t, std::size_t)>& fn);

template <typename F>
void parallel_for(std::size_t n, F&& f) {
  parallel_chunks(n, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) f(i);
  });
}

}  // namespace varcalc
