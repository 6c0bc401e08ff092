#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace eulersurf {

/// Thread count to use for a request; non-positive means "all hardware
/// threads".
inline int resolve_threads(int requested) noexcept {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Splits [0, n) into `chunks` contiguous ranges and calls
/// fn(chunk, begin, end) for each, one thread per chunk. Chunk boundaries
/// depend only on (n, chunks). The first exception thrown by a worker is
/// rethrown after all workers have joined.
template <typename Fn>
void parallel_chunks(std::size_t n, int chunks, Fn&& fn) {
  const std::size_t k = static_cast<std::size_t>(std::max(1, chunks));
  auto bounds = [&](std::size_t c) { return n * c / k; };
  if (k == 1) {
    fn(std::size_t{0}, std::size_t{0}, n);
    return;
  }
  std::vector<std::exception_ptr> errors(k);
  std::vector<std::thread> workers;
  workers.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    workers.emplace_back([&, c] {
      try {
        fn(c, bounds(c), bounds(c + 1));
      } catch (...) {
        errors[c] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace eulersurf
