#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "loopzeta/parallel.hpp"

namespace loopzeta::app {

/// Work-stealing pool: every worker owns a deque, pops its own work from the
/// back and steals from the front of the others when idle.
class ThreadPool {
 public:
  explicit ThreadPool(std::size_t workers);
  ~ThreadPool();

  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  std::size_t size() const { return queues_.size(); }

  /// Runs body(i) for i in [0, count) and blocks until all are done. The
  /// first exception thrown by a body is rethrown here. Calls from inside a
  /// pool task run serially.
  void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

  ParallelFor as_parallel_for();

 private:
  struct Queue {
    std::mutex mutex;
    std::deque<std::function<void()>> tasks;
  };

  bool try_run(std::size_t self);
  void worker_loop(std::size_t self);

  std::vector<std::unique_ptr<Queue>> queues_;
  std::vector<std::thread> threads_;
  std::mutex wake_mutex_;
  std::condition_variable wake_;
  std::atomic<std::size_t> pending_{0};
  std::atomic<std::size_t> next_queue_{0};
  bool stopping_ = false;
};

/// Worker count: LOOPZETA_WORKERS if set and positive, else `requested` if
/// positive, else the hardware concurrency.
std::size_t resolve_workers(long requested);

}  // namespace loopzeta::app
