#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace anisoflow {

/// Worker count: ANISOFLOW_THREADS when set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
int worker_count();

/// Splits [0, count) into contiguous chunks and calls fn(begin, end) for each,
/// one chunk per worker. Chunks write disjoint outputs, so results do not
/// depend on the worker count.
template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  const std::size_t w = std::clamp<std::size_t>(static_cast<std::size_t>(std::max(workers, 1)), 1, std::max<std::size_t>(count, 1));
  if (w == 1) {
    fn(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> pool;
  pool.reserve(w - 1);
  const std::size_t chunk = (count + w - 1) / w;
  for (std::size_t t = 1; t < w; ++t) {
    const std::size_t b = std::min(count, t * chunk);
    const std::size_t e = std::min(count, b + chunk);
    if (b < e) pool.emplace_back([&fn, b, e] { fn(b, e); });
  }
  fn(std::size_t{0}, std::min(count, chunk));
}

}  // namespace anisoflow
