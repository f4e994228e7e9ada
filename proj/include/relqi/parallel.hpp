#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace relqi {

/// Worker count from the RELQI_THREADS environment variable, capped at the
/// hardware concurrency; 1 when neither is available.
int default_worker_count();

/// Runs fn(i) for i in [0, count) on up to `workers` threads. Each index is
/// computed exactly once and callers store results by index, so output order
/// and values never depend on scheduling. The first exception is rethrown.
template <class Fn>
void parallel_for(std::size_t count, int workers, const Fn& fn) {
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    }
  };
  const auto n = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  std::vector<std::jthread> pool;
  pool.reserve(n);
  for (std::size_t t = 0; t < n; ++t) pool.emplace_back(worker);
  pool.clear();
  if (error) std::rethrow_exception(error);
}

}  // namespace relqi
