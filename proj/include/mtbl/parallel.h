#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace mtbl {

// Runs fn(worker, begin, end) over a static partition of [0, n). Worker 0 runs
// on the calling thread. Results must be combined by the caller in worker
// order; contributions are kept per worker so the outcome never depends on
// scheduling.
template <typename Fn>
void parallel_for(size_t n, int workers, Fn&& fn) {
  if (workers <= 1 || n == 0) {
    fn(0, static_cast<size_t>(0), n);
    return;
  }
  size_t w = static_cast<size_t>(workers);
  if (w > n) w = n;
  size_t chunk = (n + w - 1) / w;
  std::vector<std::thread> threads;
  for (size_t i = 1; i < w; ++i) {
    size_t begin = i * chunk;
    size_t end = begin + chunk < n ? begin + chunk : n;
    if (begin >= end) break;
    threads.emplace_back([&fn, i, begin, end] { fn(static_cast<int>(i), begin, end); });
  }
  fn(0, static_cast<size_t>(0), chunk < n ? chunk : n);
  for (auto& t : threads) t.join();
}

}  // namespace mtbl
