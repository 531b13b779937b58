#include "islekit/scheduler.hpp"

#include "islekit/core.hpp"

namespace islekit {

WorkerPool::WorkerPool(std::size_t threads) {
    require(threads >= 1, "worker pool needs at least one thread");
    workers_.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) workers_.emplace_back([this] { worker_loop(); });
}

WorkerPool::~WorkerPool() {
    {
        std::lock_guard lock(mutex_);
        stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : workers_) t.join();
}

void WorkerPool::run_batch(std::size_t tasks, const std::function<void(std::size_t)>& fn) {
    if (tasks == 0) return;
    std::unique_lock lock(mutex_);
    job_ = &fn;
    tasks_ = tasks;
    finished_ = 0;
    error_ = nullptr;
    next_.store(0);
    ++generation_;
    wake_.notify_all();
    done_.wait(lock, [&] { return finished_ == tasks_ && active_ == 0; });
    job_ = nullptr;
    if (error_) std::rethrow_exception(error_);
}

void WorkerPool::worker_loop() {
    std::size_t seen = 0;
    for (;;) {
        const std::function<void(std::size_t)>* job;
        std::size_t tasks;
        {
            std::unique_lock lock(mutex_);
            wake_.wait(lock, [&] { return stop_ || generation_ != seen; });
            if (stop_) return;
            seen = generation_;
            if (job_ == nullptr) continue;
            job = job_;
            tasks = tasks_;
            ++active_;
        }
        std::size_t completed = 0;
        std::exception_ptr failure;
        for (std::size_t i = next_.fetch_add(1); i < tasks; i = next_.fetch_add(1)) {
            try {
                (*job)(i);
            } catch (...) {
                if (!failure) failure = std::current_exception();
            }
            ++completed;
        }
        std::lock_guard lock(mutex_);
        if (failure && !error_) error_ = failure;
        finished_ += completed;
        --active_;
        if (finished_ == tasks_ && active_ == 0) done_.notify_all();
    }
}

}  // namespace islekit
