#include "bqs/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace bqs {

namespace {
std::atomic<unsigned> g_threads{0};

unsigned effective_threads() {
  unsigned n = g_threads.load(std::memory_order_relaxed);
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}
}  // namespace

void set_thread_count(unsigned n) { g_threads.store(n, std::memory_order_relaxed); }

unsigned thread_count() { return effective_threads(); }

namespace detail {

void parallel_for_impl(std::ptrdiff_t n,
                       const std::function<void(std::ptrdiff_t, std::ptrdiff_t)>& run_range) {
  if (n <= 0) return;
  const unsigned nt = effective_threads();
  if (nt <= 1 || n < 1024) {
    run_range(0, n);
    return;
  }
  const std::ptrdiff_t workers = std::min<std::ptrdiff_t>(nt, n);
  const std::ptrdiff_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(workers));
  for (std::ptrdiff_t w = 0; w < workers; ++w) {
    const std::ptrdiff_t lo = w * chunk;
    const std::ptrdiff_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([&, lo, hi] { run_range(lo, hi); });
  }
  for (auto& t : pool) t.join();
}

}  // namespace detail

Real pairwise_sum(std::span<const Real> values) {
  const std::size_t n = values.size();
  if (n == 0) return 0.0;
  if (n <= 16) {
    Real s = 0.0;
    for (Real v : values) s += v;
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

}  // namespace bqs
