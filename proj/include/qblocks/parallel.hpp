#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace qblocks {

/// Runs fn(task) for task in [0, tasks) on `workers` threads. Tasks are
/// claimed dynamically, so callers must write results into per-task slots;
/// the first exception thrown by any task is rethrown after all threads join.
template <class F>
void parallel_for(std::int64_t tasks, int workers, F&& fn) {
  if (tasks <= 0) return;
  workers = std::max(1, std::min<int>(workers, static_cast<int>(std::min<std::int64_t>(tasks, 1024))));
  if (workers == 1) {
    for (std::int64_t i = 0; i < tasks; ++i) fn(i);
    return;
  }
  std::atomic<std::int64_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    while (true) {
      std::int64_t i = next.fetch_add(1);
      if (i >= tasks) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(tasks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(body);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Pairwise reduction in a fixed tree shape over the slot order.
template <class T, class Add>
T tree_reduce(std::vector<T> items, T zero, Add add) {
  if (items.empty()) return zero;
  while (items.size() > 1) {
    std::vector<T> next;
    next.reserve((items.size() + 1) / 2);
    for (std::size_t i = 0; i + 1 < items.size(); i += 2) next.push_back(add(items[i], items[i + 1]));
    if (items.size() % 2) next.push_back(std::move(items.back()));
    items = std::move(next);
  }
  return std::move(items.front());
}

}  // namespace qblocks
