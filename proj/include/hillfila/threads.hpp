#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace hillfila {

// Worker cap: HILLFILA_THREADS if set, else hardware concurrency.
inline int worker_count() {
  static const int n = [] {
    if (const char* s = std::getenv("HILLFILA_THREADS")) {
      const int v = std::atoi(s);
      if (v > 0) return v;
    }
    const unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? static_cast<int>(hc) : 1;
  }();
  return n;
}

// Static contiguous partition of [0, n) over the workers. Each index is
// processed exactly once and each worker's loop is serial, so results do not
// depend on the worker count.
template <class F>
void parallel_for(std::size_t n, F&& f) {
  const std::size_t t = static_cast<std::size_t>(worker_count());
  if (t <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  const std::size_t workers = std::min(t, n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &f] {
      for (std::size_t i = lo; i < hi; ++i) f(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace hillfila
