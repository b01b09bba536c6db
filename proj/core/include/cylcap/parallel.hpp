#pragma once

#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace cylcap {

/// Runs fn(begin, end, slot) over [0, total) split into `threads` contiguous
/// chunks. Chunk boundaries depend only on (total, threads), so per-slot
/// results merged in slot order are reproducible for a fixed thread count.
inline void parallel_chunks(std::size_t total, int threads,
                            const std::function<void(std::size_t, std::size_t, int)>& fn) {
  if (threads <= 1 || total < 2048) {
    fn(0, total, 0);
    return;
  }
  const std::size_t chunk = (total + threads - 1) / threads;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int slot = 0; slot < threads; ++slot) {
    const std::size_t begin = std::min(total, slot * chunk);
    const std::size_t end = std::min(total, begin + chunk);
    if (begin == end) break;
    pool.emplace_back(fn, begin, end, slot);
  }
  for (auto& t : pool) t.join();
}

}  // namespace cylcap
