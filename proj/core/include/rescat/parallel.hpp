#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace rescat {

/// Static-partition parallel loop over [0, n); fn(i) must be safe to run
/// concurrently for distinct i.  The first exception thrown by any worker is
/// rethrown on the caller after all workers join, so results stay
/// deterministic (callers write into index-addressed slots).
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn, unsigned thread_count = 0) {
  if (n == 0) return;
  unsigned hw = thread_count ? thread_count : std::thread::hardware_concurrency();
  hw = std::max(1u, std::min<unsigned>(hw, static_cast<unsigned>(n)));
  if (hw == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }

  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> workers;
  workers.reserve(hw);
  for (unsigned t = 0; t < hw; ++t) {
    workers.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += hw) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rescat
