#ifndef RBPCR_PARALLEL_HPP
#define RBPCR_PARALLEL_HPP

#include <algorithm>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace rbpcr {

inline int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

// Runs f(0..n_tasks-1), striped over n_threads. Tasks must write to
// disjoint slots; results are then independent of scheduling. The first
// exception thrown by any task is rethrown on the calling thread.
inline void parallel_for(int n_tasks, int n_threads,
                         const std::function<void(int)>& f) {
  n_threads = std::min(resolve_threads(n_threads), std::max(n_tasks, 1));
  if (n_threads <= 1 || n_tasks <= 1) {
    for (int i = 0; i < n_tasks; ++i) f(i);
    return;
  }
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_threads));
  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n_threads));
  for (int t = 0; t < n_threads; ++t) {
    workers.emplace_back([&, t]() {
      try {
        for (int i = t; i < n_tasks; i += n_threads) f(i);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace rbpcr

#endif  // RBPCR_PARALLEL_HPP
