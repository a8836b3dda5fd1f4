#include "loopzeta_app/thread_pool.hpp"

#include <cstdlib>
#include <exception>
#include <string>

namespace loopzeta::app {

namespace {
thread_local bool inside_pool = false;
}

ThreadPool::ThreadPool(std::size_t workers) {
  if (workers == 0) workers = 1;
  for (std::size_t i = 0; i < workers; ++i) queues_.push_back(std::make_unique<Queue>());
  // With a single worker the calling thread does all the work.
  if (workers > 1) {
    for (std::size_t i = 0; i < workers; ++i) threads_.emplace_back([this, i] { worker_loop(i); });
  }
}

ThreadPool::~ThreadPool() {
  {
    std::lock_guard lock(wake_mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  for (auto& t : threads_) t.join();
}

bool ThreadPool::try_run(std::size_t self) {
  std::function<void()> task;
  const std::size_t n = queues_.size();
  {
    auto& own = *queues_[self % n];
    std::lock_guard lock(own.mutex);
    if (!own.tasks.empty()) {
      task = std::move(own.tasks.back());
      own.tasks.pop_back();
    }
  }
  for (std::size_t k = 1; !task && k < n; ++k) {
    auto& victim = *queues_[(self + k) % n];
    std::lock_guard lock(victim.mutex);
    if (!victim.tasks.empty()) {
      task = std::move(victim.tasks.front());
      victim.tasks.pop_front();
    }
  }
  if (!task) return false;
  pending_ -= 1;
  task();
  return true;
}

void ThreadPool::worker_loop(std::size_t self) {
  inside_pool = true;
  while (true) {
    if (try_run(self)) continue;
    std::unique_lock lock(wake_mutex_);
    wake_.wait(lock, [this] { return stopping_ || pending_.load() > 0; });
    if (stopping_) return;
    lock.unlock();
    try_run(self);
  }
}

void ThreadPool::parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  if (count == 0) return;
  if (threads_.empty() || inside_pool || count == 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::size_t remaining = count;  // guarded by done_mutex
  std::mutex done_mutex;
  std::condition_variable done;
  std::exception_ptr error;
  std::mutex error_mutex;

  // Contiguous chunks, several per worker so that stealing can balance.
  const std::size_t chunks = std::min(count, queues_.size() * 4);
  for (std::size_t c = 0; c < chunks; ++c) {
    const std::size_t begin = count * c / chunks;
    const std::size_t end = count * (c + 1) / chunks;
    auto task = [&, begin, end] {
      for (std::size_t i = begin; i < end; ++i) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
      std::lock_guard lock(done_mutex);
      remaining -= end - begin;
      if (remaining == 0) done.notify_all();
    };
    auto& q = *queues_[next_queue_++ % queues_.size()];
    std::lock_guard lock(q.mutex);
    q.tasks.emplace_back(std::move(task));
    pending_ += 1;
  }
  {
    std::lock_guard lock(wake_mutex_);
  }
  wake_.notify_all();
  std::unique_lock lock(done_mutex);
  done.wait(lock, [&] { return remaining == 0; });
  if (error) std::rethrow_exception(error);
}

ParallelFor ThreadPool::as_parallel_for() {
  return [this](std::size_t count, const std::function<void(std::size_t)>& body) { parallel_for(count, body); };
}

std::size_t resolve_workers(long requested) {
  if (const char* env = std::getenv("LOOPZETA_WORKERS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
  }
  if (requested > 0) return static_cast<std::size_t>(requested);
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

}  // namespace loopzeta::app
