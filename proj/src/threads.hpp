#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace crpt {

// Deterministic parallel loop: work item i writes only to slot i of
// caller-owned storage, reductions happen afterwards in index order, so
// results are identical for any thread count.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn&& fn) {
  if (threads <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (std::size_t w = 0; w < nt; ++w) {
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += nt) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

} // namespace crpt
