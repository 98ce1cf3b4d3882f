#include "tether/pool.hpp"

#include <system_error>

namespace tether {

std::size_t hardware_workers() noexcept {
    const unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

ThreadPool::ThreadPool(std::size_t n_workers) : n_workers_(n_workers) {
    workers_.reserve(n_workers_);
    try {
        for (std::size_t i = 0; i < n_workers_; ++i) {
            workers_.emplace_back([this] { worker_loop(); });
        }
    } catch (const std::system_error& e) {
        stop_workers();
        throw SpawnFailure(e.what());
    }
}

ThreadPool::~ThreadPool() {
    if (!join_called_.exchange(true)) stop_workers();
}

void ThreadPool::enqueue(Task task) {
    if (n_workers_ == 0) {
        if (join_called_.load()) throw PoolStopped();
        execute(task);
        return;
    }
    {
        std::lock_guard lock(mutex_);
        if (stopped_ || join_called_.load()) throw PoolStopped();
        queue_.push_back(std::move(task));
    }
    work_cv_.notify_one();
}

void ThreadPool::execute(Task& task) {
    // Workers read the flag only; polling the source is the host's job.
    std::exception_ptr reason;
    if (HostContext::instance().interrupt_flag()) {
        reason = std::make_exception_ptr(Interrupted());
    } else {
        std::lock_guard lock(mutex_);
        if (first_error_) reason = std::make_exception_ptr(TaskFailed(first_error_));
    }

    if (reason) {
        if (task.discard) task.discard(reason);
        return;
    }

    try {
        task.run();
    } catch (...) {
        std::lock_guard lock(mutex_);
        if (!first_error_) first_error_ = std::current_exception();
    }
}

void ThreadPool::worker_loop() {
    for (;;) {
        Task task;
        {
            std::unique_lock lock(mutex_);
            work_cv_.wait(lock, [this] { return stopped_ || !queue_.empty(); });
            if (queue_.empty()) return;
            task = std::move(queue_.front());
            queue_.pop_front();
            ++busy_;
        }
        execute(task);
        task = {};
        {
            std::lock_guard lock(mutex_);
            --busy_;
            if (!idle()) continue;
        }
        idle_cv_.notify_all();
    }
}

void ThreadPool::wait() {
    auto wait_idle = [this](std::chrono::milliseconds d) {
        std::unique_lock lock(mutex_);
        return idle_cv_.wait_for(lock, d, [this] { return idle(); });
    };
    if (is_host_thread()) pump_until(wait_idle, pump_interval_);

    // After an interruption the remaining queue is discarded quickly, but
    // running tasks may still touch caller state; let them finish.
    {
        std::unique_lock lock(mutex_);
        idle_cv_.wait(lock, [this] { return idle(); });
    }
    finish_wait();
}

void ThreadPool::finish_wait() {
    flush();
    check_interrupt();

    std::exception_ptr error;
    {
        std::lock_guard lock(mutex_);
        error.swap(first_error_);
    }
    if (error) throw TaskFailed(error);
}

void ThreadPool::join() {
    if (join_called_.load()) throw AlreadyJoined();
    try {
        wait();
    } catch (...) {
        join_called_.store(true);
        stop_workers();
        flush();
        throw;
    }
    join_called_.store(true);
    stop_workers();
    flush();
    check_interrupt();
}

void ThreadPool::stop_workers() noexcept {
    {
        std::lock_guard lock(mutex_);
        stopped_ = true;
    }
    work_cv_.notify_all();
    for (auto& w : workers_) {
        if (w.joinable()) w.join();
    }
}

} // namespace tether
