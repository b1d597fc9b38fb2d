#pragma once

// Minimal fork-join loop. Workers own disjoint index blocks and write results
// into preallocated slots, so output is independent of the worker count.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace rotspec {

inline void parallel_for(std::size_t n, unsigned n_threads,
                         const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  const unsigned nt = std::max(1u, std::min<unsigned>(n_threads, n));
  if (nt == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  const std::size_t block = (n + nt - 1) / nt;
  for (unsigned w = 0; w < nt; ++w) {
    const std::size_t b = w * block;
    const std::size_t e = std::min(n, b + block);
    if (b >= e) break;
    pool.emplace_back([&, b, e] {
      for (std::size_t i = b; i < e; ++i) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace rotspec
