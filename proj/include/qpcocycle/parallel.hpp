#pragma once
//
// Minimal parallel-map helper with deterministic results.
//
// Work items write into caller-owned slots (one per index), so the final
// reduction is a plain sequential pass and the output is bit-identical for
// every worker count.  The pool size is a process-wide setting fed from the
// CLI flag --workers or the COCYCLE_WORKERS environment variable.

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace qpc::parallel {

// Returns the active worker count (>= 1).  Resolution order: explicit
// set_worker_count(), then COCYCLE_WORKERS, then hardware concurrency.
int worker_count();

// Overrides the worker count for the whole process; n < 1 resets to auto.
void set_worker_count(int n);

// Applies body(i) for i in [0, n).  Dispatch order is unspecified, so the
// body must only touch its own slot; determinism comes from that discipline,
// not from scheduling.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const int workers = worker_count();
  if (workers <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  auto drain = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      body(i);
    }
  };
  std::vector<std::thread> pool;
  const std::size_t spawn = std::min<std::size_t>(static_cast<std::size_t>(workers), n);
  pool.reserve(spawn - 1);
  for (std::size_t t = 1; t < spawn; ++t) pool.emplace_back(drain);
  drain();
  for (auto& th : pool) th.join();
}

}  // namespace qpc::parallel
