#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace irs {

// Worker count used by the parallel loops below. Block boundaries never
// depend on it, so results do not change with the pool size.
inline std::atomic<int>& thread_count() {
  static std::atomic<int> n{1};
  return n;
}
inline void set_thread_count(int n) { thread_count() = std::max(1, n); }

inline std::size_t block_count(std::size_t total, std::size_t block) {
  return (total + block - 1) / block;
}

// Runs fn(begin, end, block_index) over fixed-size blocks of [0, total).
template <class Fn>
void parallel_blocks(std::size_t total, std::size_t block, Fn&& fn) {
  const std::size_t nblocks = block_count(total, block);
  const int workers = std::min<int>(thread_count(), static_cast<int>(nblocks));
  auto run = [&](std::size_t b) {
    const std::size_t lo = b * block;
    fn(lo, std::min(total, lo + block), b);
  };
  if (workers <= 1) {
    for (std::size_t b = 0; b < nblocks; ++b) run(b);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t b = next++; b < nblocks; b = next++) run(b);
    });
  for (auto& t : pool) t.join();
}

}  // namespace irs
