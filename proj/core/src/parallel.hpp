#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace ribcat::detail {

// Runs fn(0..n-1) across up to `jobs` threads.  Work items must write only
// to their own slots; the first exception wins and is rethrown here.
inline void parallel_for(std::size_t n, int jobs,
                         const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n <= 1) {
    for (std::size_t k = 0; k < n; ++k) fn(k);
    return;
  }
  std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(jobs));
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr first;
  std::mutex gate;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      std::size_t k;
      while (!failed.load(std::memory_order_relaxed) &&
             (k = next.fetch_add(1)) < n) {
        try {
          fn(k);
        } catch (...) {
          std::lock_guard<std::mutex> lock(gate);
          if (!first) first = std::current_exception();
          failed.store(true, std::memory_order_relaxed);
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first) std::rethrow_exception(first);
}

}  // namespace ribcat::detail
