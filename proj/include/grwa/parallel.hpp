#pragma once

// Minimal static-partition parallel loop. Each index is processed exactly
// once and writes only its own output slot, so results do not depend on the
// thread count.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace grwa {

inline int& default_thread_count() {
  static int count = 0;  // 0 = hardware concurrency
  return count;
}

inline int resolve_threads(int requested) {
  int n = requested > 0 ? requested : default_thread_count();
  if (n <= 0) n = static_cast<int>(std::thread::hardware_concurrency());
  return std::max(1, n);
}

// Calls fn(i) for i in [0, count). Indices are handed out in contiguous
// chunks through an atomic counter; the first exception thrown by any worker
// is rethrown on the calling thread.
template <class Fn>
void parallel_for(std::size_t count, Fn&& fn, int threads = 0, std::size_t chunk = 0) {
  const int n_threads = static_cast<int>(std::min<std::size_t>(resolve_threads(threads), count));
  if (n_threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  if (chunk == 0) chunk = std::max<std::size_t>(1, count / (8 * static_cast<std::size_t>(n_threads)));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t begin = next.fetch_add(chunk);
      if (begin >= count) return;
      const std::size_t end = std::min(count, begin + chunk);
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n_threads - 1);
  for (int k = 1; k < n_threads; ++k) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace grwa
