#ifndef LANGEVIN_PARALLEL_HPP
#define LANGEVIN_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace langevin {

/// Worker count: set_thread_count() if called, else LANGEVIN_THREADS, else
/// the hardware concurrency.
int thread_count();
void set_thread_count(int n);

/// Runs fn(i) for i in [0, n). Each task must only write its own output slot;
/// results then do not depend on scheduling. Rethrows the first exception.
template <class Fn>
void parallel_for(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(thread_count()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next = n;
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w + 1 < workers; ++w) pool.emplace_back(work);
    work();
  }
  if (error) std::rethrow_exception(error);
}

/// parallel_for collecting one result per task, in task order.
template <class R, class Fn>
std::vector<R> parallel_map(std::size_t n, Fn&& fn) {
  std::vector<R> out(n);
  parallel_for(n, [&](std::size_t i) { out[i] = fn(i); });
  return out;
}

}  // namespace langevin

#endif  // LANGEVIN_PARALLEL_HPP
