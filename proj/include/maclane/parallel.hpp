#pragma once

// Deterministic parallel map over an index range. Work is split into fixed
// chunks assigned round-robin, so results are identical for any thread count.
// FHC_THREADS caps the number of worker threads.

#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace maclane {

inline unsigned thread_budget() {
  unsigned hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("FHC_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && v >= 1 && v < 1024) return (unsigned)v;
  }
  return hw;
}

// body(i) for i in [0, n); per-index outputs must be written to preallocated
// slots so the result does not depend on scheduling.
inline void parallel_for(std::size_t n, const std::function<void(std::size_t)>& body) {
  unsigned nt = thread_budget();
  if (nt <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  if (nt > n) nt = (unsigned)n;
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::vector<std::exception_ptr> errs(nt);
  for (unsigned t = 0; t < nt; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < n; i += nt) body(i);
      } catch (...) {
        errs[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errs)
    if (e) std::rethrow_exception(e);
}

}  // namespace maclane
