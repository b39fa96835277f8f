#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace patminer::detail {

// Runs body(worker, task) over [0, num_tasks). There are `workers` logical
// workers, each with its own state; OS thread t drives workers t, t+T, ...,
// handing successive task chunks to them in turn. Chunks are claimed from a
// shared counter so threads stay busy until the list is drained.
template <typename Body>
void for_each_task(std::size_t num_tasks, std::size_t workers, std::size_t threads,
                   const std::atomic<bool>& stop, Body&& body) {
  if (num_tasks == 0 || workers == 0) return;
  threads = std::max<std::size_t>(1, std::min(threads, workers));
  const std::size_t chunk = std::clamp<std::size_t>(num_tasks / (threads * 64), 1, 256);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mu;

  auto drive = [&](std::size_t t) {
    try {
      std::size_t turn = 0;
      const std::size_t owned = (workers - t + threads - 1) / threads;
      while (!stop.load(std::memory_order_relaxed)) {
        const std::size_t begin = next.fetch_add(chunk, std::memory_order_relaxed);
        if (begin >= num_tasks) break;
        const std::size_t end = std::min(num_tasks, begin + chunk);
        const std::size_t w = t + threads * (turn++ % owned);
        for (std::size_t i = begin; i < end && !stop.load(std::memory_order_relaxed); ++i) body(w, i);
      }
    } catch (...) {
      std::lock_guard lock(error_mu);
      if (!error) error = std::current_exception();
      next.store(num_tasks);
    }
  };

  if (threads == 1) {
    drive(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(drive, t);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
}

}  // namespace patminer::detail
