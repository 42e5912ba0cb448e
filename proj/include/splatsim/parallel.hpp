#pragma once

#include <condition_variable>
#include <cstddef>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace splatsim {

// Fixed-size pool with static work partitioning. Ranges are split into
// exactly `size()` contiguous chunks, so for a fixed thread count the
// partition (and any per-thread accumulation order) is reproducible.
// With size() == 1 work runs inline on the caller.
class ThreadPool {
public:
    explicit ThreadPool(int threads);
    ~ThreadPool();

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    int size() const { return int(workers_.size()) + 1; }

    // fn(begin, end, chunk_index); chunk_index in [0, size()).
    void parallel_chunks(size_t n, const std::function<void(size_t, size_t, int)>& fn);

    // Convenience: fn(i) for each i in [0, n).
    void parallel_for(size_t n, const std::function<void(size_t)>& fn);

private:
    struct Task {
        const std::function<void(size_t, size_t, int)>* fn = nullptr;
        size_t begin = 0, end = 0;
        int chunk = 0;
    };

    void worker_loop(int index);

    std::vector<std::thread> workers_;
    std::vector<Task> tasks_;
    std::mutex mutex_;
    std::condition_variable cv_start_;
    std::condition_variable cv_done_;
    uint64_t generation_ = 0;
    int pending_ = 0;
    bool stop_ = false;
};

// Pool shared by the renderer and simulator; sized once by the CLI
// (--threads) or test setup. Defaults to hardware_concurrency.
ThreadPool& global_pool();
void set_global_threads(int threads);

}  // namespace splatsim
