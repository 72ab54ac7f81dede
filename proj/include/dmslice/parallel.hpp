#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace dmslice::parallel {

// Process-wide worker count.  Defaults to $DMSLICE_WORKERS, else 1.
unsigned worker_count();
void set_worker_count(unsigned n);

/// Calls fn(i) for every i in [0, n).  Indices are split into contiguous
/// chunks, one per worker; callers write results into slot i so the output
/// never depends on the worker count.
template <class Fn>
void for_each_index(std::size_t n, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t begin = n * w / workers;
    const std::size_t end = n * (w + 1) / workers;
    pool.emplace_back([&, begin, end] {
      try {
        for (std::size_t i = begin; i < end; ++i) fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

/// RAII override of the worker count.
class ScopedWorkers {
 public:
  explicit ScopedWorkers(unsigned n) : saved_(worker_count()) { set_worker_count(n); }
  ~ScopedWorkers() { set_worker_count(saved_); }
  ScopedWorkers(const ScopedWorkers&) = delete;
  ScopedWorkers& operator=(const ScopedWorkers&) = delete;

 private:
  unsigned saved_;
};

}  // namespace dmslice::parallel
