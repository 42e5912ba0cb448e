#include "splatsim/parallel.hpp"

#include <algorithm>
#include <memory>

namespace splatsim {

ThreadPool::ThreadPool(int threads) {
    int n = std::max(1, threads);
    tasks_.resize(size_t(n));
    workers_.reserve(size_t(n - 1));
    for (int i = 1; i < n; ++i) {
        workers_.emplace_back([this, i] { worker_loop(i); });
    }
}

ThreadPool::~ThreadPool() {
    {
        std::lock_guard<std::mutex> lock(mutex_);
        stop_ = true;
    }
    cv_start_.notify_all();
    for (auto& w : workers_) w.join();
}

void ThreadPool::worker_loop(int index) {
    uint64_t seen = 0;
    for (;;) {
        Task task;
        {
            std::unique_lock<std::mutex> lock(mutex_);
            cv_start_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            task = tasks_[size_t(index)];
        }
        if (task.fn && task.begin < task.end) {
            (*task.fn)(task.begin, task.end, task.chunk);
        }
        {
            std::lock_guard<std::mutex> lock(mutex_);
            if (--pending_ == 0) cv_done_.notify_all();
        }
    }
}

void ThreadPool::parallel_chunks(size_t n, const std::function<void(size_t, size_t, int)>& fn) {
    int threads = size();
    if (threads == 1 || n <= 1) {
        if (n > 0) fn(0, n, 0);
        return;
    }
    size_t chunk = (n + size_t(threads) - 1) / size_t(threads);
    {
        std::lock_guard<std::mutex> lock(mutex_);
        for (int i = 0; i < threads; ++i) {
            size_t begin = std::min(n, size_t(i) * chunk);
            size_t end = std::min(n, begin + chunk);
            tasks_[size_t(i)] = Task{&fn, begin, end, i};
        }
        pending_ = threads - 1;
        ++generation_;
    }
    cv_start_.notify_all();
    // Chunk 0 runs on the caller.
    if (tasks_[0].begin < tasks_[0].end) fn(tasks_[0].begin, tasks_[0].end, 0);
    std::unique_lock<std::mutex> lock(mutex_);
    cv_done_.wait(lock, [&] { return pending_ == 0; });
}

void ThreadPool::parallel_for(size_t n, const std::function<void(size_t)>& fn) {
    parallel_chunks(n, [&fn](size_t begin, size_t end, int) {
        for (size_t i = begin; i < end; ++i) fn(i);
    });
}

namespace {
std::unique_ptr<ThreadPool> g_pool;
std::mutex g_pool_mutex;
}  // namespace

ThreadPool& global_pool() {
    std::lock_guard<std::mutex> lock(g_pool_mutex);
    if (!g_pool) {
        unsigned hw = std::thread::hardware_concurrency();
        g_pool = std::make_unique<ThreadPool>(int(hw ? hw : 1));
    }
    return *g_pool;
}

void set_global_threads(int threads) {
    std::lock_guard<std::mutex> lock(g_pool_mutex);
    g_pool = std::make_unique<ThreadPool>(threads);
}

}  // namespace splatsim
