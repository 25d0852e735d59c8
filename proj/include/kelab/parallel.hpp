#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace kelab::parallel {

/// Thread cap: KE_LAB_THREADS if set (0 = hardware concurrency), else auto.
int max_threads();
void set_max_threads(int threads);

/// Runs body(begin, end) over contiguous chunks of [0, count).
///
/// Work items must be independent; the chunk boundaries never influence the
/// values written, so results do not depend on the thread count.
template <class Body>
void for_range(std::size_t count, Body&& body, std::size_t min_chunk = 4096) {
  const auto threads = static_cast<std::size_t>(std::max(1, max_threads()));
  const std::size_t chunks = std::min(threads, std::max<std::size_t>(1, count / min_chunk));
  if (chunks <= 1) {
    body(std::size_t{0}, count);
    return;
  }
  std::vector<std::jthread> workers;
  workers.reserve(chunks - 1);
  const std::size_t step = (count + chunks - 1) / chunks;
  for (std::size_t c = 1; c < chunks; ++c) {
    const std::size_t begin = c * step;
    const std::size_t end = std::min(count, begin + step);
    if (begin >= end) break;
    workers.emplace_back([&body, begin, end] { body(begin, end); });
  }
  body(std::size_t{0}, std::min(count, step));
}

}  // namespace kelab::parallel
