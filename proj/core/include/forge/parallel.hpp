#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace forge {

// Runs fn(i) for i in [0, n) on at most `max_in_flight` threads. Results are
// stored by index so the output order never depends on scheduling. The first
// exception thrown by any call is rethrown after all workers finish.
template <typename Fn>
auto parallel_map(std::size_t n, std::size_t max_in_flight, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::size_t>> {
  using Result = std::invoke_result_t<Fn&, std::size_t>;
  static_assert(!std::is_same_v<Result, bool>, "vector<bool> elements cannot be written concurrently");
  std::vector<Result> results(n);
  if (n == 0) return results;
  const std::size_t width = std::clamp<std::size_t>(max_in_flight, 1, n);
  if (width == 1) {
    for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
    return results;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) {
      try {
        results[i] = fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(width);
    for (std::size_t t = 0; t < width; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

}  // namespace forge
