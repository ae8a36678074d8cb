#pragma once

// Independent tasks on a small thread pool. Results are stored by task
// index, so the output order never depends on completion order. Each
// worker inherits the caller's working precision.

#include <algorithm>
#include <atomic>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

#include "hmt/numerics/xreal.hpp"

namespace hmt {

inline int default_thread_count() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

/// out[i] = fn(i) for i in [0, count). threads <= 0 picks the hardware
/// concurrency. The first exception thrown by any task is rethrown.
template <class Fn>
auto parallel_map(int count, int threads, Fn&& fn) -> std::vector<std::invoke_result_t<Fn&, int>> {
  using R = std::invoke_result_t<Fn&, int>;
  std::vector<R> out(static_cast<std::size_t>(std::max(count, 0)));
  if (count <= 0) return out;
  if (threads <= 0) threads = default_thread_count();
  threads = std::min(threads, count);
  const int digits = working_digits();
  if (threads == 1) {
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(count);
  auto worker = [&]() {
    const ScopedDigits scope(digits);
    for (int i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

}  // namespace hmt
