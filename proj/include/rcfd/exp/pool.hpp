// Bounded worker pool for independent runs.

#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rcfd::exp {

/// Worker count for a jobs request; 0 means one per hardware thread.
inline unsigned worker_count(int jobs, std::size_t tasks)
{
  unsigned n = jobs > 0 ? static_cast<unsigned>(jobs) : std::thread::hardware_concurrency();
  n = std::max(1u, n);
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(tasks, 1)));
}

/// Runs task(i) for i in [0, count) on at most `jobs` threads. Results go
/// wherever the task writes them, so their order follows the index and not
/// completion. Each failure is kept in errors[i]; other tasks continue.
inline std::vector<std::exception_ptr> run_indexed(std::size_t count, int jobs,
                                                   const std::function<void(std::size_t)>& task)
{
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        task(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned n = worker_count(jobs, count);
  if (n == 1) {
    worker();
    return errors;
  }
  std::vector<std::thread> threads;
  threads.reserve(n);
  for (unsigned t = 0; t < n; ++t) {
    threads.emplace_back(worker);
  }
  for (std::thread& t : threads) {
    t.join();
  }
  return errors;
}

} // namespace rcfd::exp
