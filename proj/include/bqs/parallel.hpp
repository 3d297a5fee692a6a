#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "bqs/types.hpp"

namespace bqs {

/// Set the worker-thread count used by parallel_for.  0 restores the
/// hardware default.  Thread count never affects results: reductions are
/// computed by deterministic pairwise summation over index order.
void set_thread_count(unsigned n);
unsigned thread_count();

namespace detail {
void parallel_for_impl(std::ptrdiff_t n,
                       const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& run_range);
}

/// Apply body(i) for i in [0, n), possibly on several threads.  body must
/// only write to locations owned by index i.
template <class F>
void parallel_for(std::ptrdiff_t n, F&& body) {
  detail::parallel_for_impl(n, [&](std::ptrdiff_t lo, std::ptrdiff_t hi) {
    for (std::ptrdiff_t i = lo; i < hi; ++i) body(i);
  });
}

/// Sum in a fixed pairwise (binary-tree) order.  Bit-reproducible for a
/// given input sequence regardless of thread count.
Real pairwise_sum(std::span<const Real> values);

}  // namespace bqs
