#pragma once

#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace islekit {

/// Fixed set of worker threads executing batches of indexed tasks. Workers
/// claim task indices from a shared counter, so uneven tasks balance out.
/// run_batch blocks until the whole batch is done (the barrier).
class WorkerPool {
public:
    explicit WorkerPool(std::size_t threads);
    ~WorkerPool();

    WorkerPool(const WorkerPool&) = delete;
    WorkerPool& operator=(const WorkerPool&) = delete;

    std::size_t size() const noexcept { return workers_.size(); }

    /// Runs fn(0..tasks-1) across the workers. The first exception thrown by a
    /// task is rethrown here after the batch drains.
    void run_batch(std::size_t tasks, const std::function<void(std::size_t)>& fn);

private:
    void worker_loop();

    std::vector<std::thread> workers_;
    std::mutex mutex_;
    std::condition_variable wake_;
    std::condition_variable done_;
    const std::function<void(std::size_t)>* job_ = nullptr;
    std::size_t tasks_ = 0;
    std::atomic<std::size_t> next_{0};
    std::size_t finished_ = 0;
    std::size_t active_ = 0;
    std::size_t generation_ = 0;
    bool stop_ = false;
    std::exception_ptr error_;
};

}  // namespace islekit
