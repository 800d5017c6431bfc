#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qfbsde::detail {

inline unsigned resolve_threads(unsigned requested, std::size_t n_chunks) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(1, n_chunks)));
}

/// Calls fn(chunk) for every chunk in [0, n_chunks). Chunks are claimed
/// dynamically; callers write results into per-chunk slots and reduce them in
/// chunk order afterwards.
template <class Fn>
void for_each_chunk(std::size_t n_chunks, unsigned threads, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t chunk = next.fetch_add(1);
      if (chunk >= n_chunks) return;
      try {
        fn(chunk);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n_chunks);
      }
    }
  };

  const unsigned n = resolve_threads(threads, n_chunks);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n);
    for (unsigned i = 0; i < n; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

}  // namespace qfbsde::detail
