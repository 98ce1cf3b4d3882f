#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <exception>
#include <functional>
#include <future>
#include <iterator>
#include <memory>
#include <mutex>
#include <ranges>
#include <thread>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include "tether/batch.hpp"
#include "tether/errors.hpp"
#include "tether/host_sync.hpp"
#include "tether/pump.hpp"

namespace tether {

/// hardware_concurrency(), or 1 if unknown.
std::size_t hardware_workers() noexcept;

/// One-shot result of ThreadPool::push_return. get() on the host thread
/// pumps like GuestThread::join.
template <class T>
class ResultHandle {
public:
    ResultHandle() = default;
    explicit ResultHandle(std::future<T> f) : future_(std::move(f)) {}

    bool valid() const noexcept { return future_.valid(); }

    bool ready() const {
        return future_.wait_for(std::chrono::seconds(0)) == std::future_status::ready;
    }

    /// Blocks until the task finished; returns its value or rethrows its
    /// error. A task discarded because of an interruption yields
    /// Interrupted. Throws std::future_error when claimed twice.
    T get(std::chrono::milliseconds pump_interval = default_pump_interval) {
        if (!future_.valid()) throw std::future_error(std::future_errc::no_state);
        if (is_host_thread()) {
            const bool done = pump_until(
                [this](auto d) { return future_.wait_for(d) == std::future_status::ready; },
                pump_interval);
            flush();
            if (!done) check_interrupt();
        }
        return future_.get();
    }

private:
    std::future<T> future_;
};

/// Fixed set of workers fed from one FIFO queue.
///
/// Before running a task a worker reads the global interrupt flag; if it is
/// set, or an earlier task already raised, the task is discarded. The first
/// error raised by a push()ed task is kept and rethrown (wrapped in
/// TaskFailed) by the next wait() or join(). Errors of push_return() tasks
/// go to their ResultHandle instead.
///
/// A pool with zero workers runs each task inline in push().
///
/// push() and the loop methods may be called from any thread, including from
/// inside a task. wait() and join() pump host synchronization when called
/// on the host thread.
class ThreadPool {
public:
    ThreadPool() : ThreadPool(hardware_workers()) {}
    explicit ThreadPool(std::size_t n_workers);

    ThreadPool(const ThreadPool&) = delete;
    ThreadPool& operator=(const ThreadPool&) = delete;

    /// Retires workers without pumping if join() was never called. Pending
    /// tasks still run; errors are dropped.
    ~ThreadPool();

    std::size_t n_workers() const noexcept { return n_workers_; }
    bool joined() const noexcept { return join_called_.load(); }

    std::chrono::milliseconds pump_interval() const noexcept { return pump_interval_; }
    void set_pump_interval(std::chrono::milliseconds interval) noexcept {
        pump_interval_ = interval;
    }

    template <class Function, class... Args>
    void push(Function&& task, Args&&... args) {
        auto bound = bind(std::forward<Function>(task), std::forward<Args>(args)...);
        enqueue(Task{std::move(bound), nullptr});
    }

    template <class Function, class... Args>
    auto push_return(Function&& task, Args&&... args)
        -> ResultHandle<std::invoke_result_t<std::decay_t<Function>, std::decay_t<Args>...>> {
        using R = std::invoke_result_t<std::decay_t<Function>, std::decay_t<Args>...>;
        auto promise = std::make_shared<std::promise<R>>();
        ResultHandle<R> handle(promise->get_future());
        auto bound = bind(std::forward<Function>(task), std::forward<Args>(args)...);
        enqueue(Task{
            [promise, bound]() mutable {
                try {
                    if constexpr (std::is_void_v<R>) {
                        bound();
                        promise->set_value();
                    } else {
                        promise->set_value(bound());
                    }
                } catch (...) {
                    promise->set_exception(std::current_exception());
                }
            },
            [promise](std::exception_ptr why) { promise->set_exception(std::move(why)); }});
        return handle;
    }

    /// Splits [begin, end) into batches and pushes one task per batch.
    /// Returns immediately; completion is observed through wait() or join().
    /// n_batches = 0 selects auto_batch_count.
    template <class Body>
    void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end, Body&& body,
                      std::size_t n_batches = 0) {
        if (join_called_.load()) throw PoolStopped();
        if (begin == end) return;
        const auto n = static_cast<std::size_t>(end > begin ? end - begin : 0);
        const BatchPlan plan =
            make_batch_plan(begin, end, n_batches ? n_batches : auto_batch_count(n, n_workers_));
        auto shared = std::make_shared<std::decay_t<Body>>(std::forward<Body>(body));
        for (std::size_t k = 0; k < plan.n_batches(); ++k) {
            push([shared, lo = plan.batch_begin(k), hi = plan.batch_end(k)] {
                for (auto i = lo; i < hi; ++i) (*shared)(i);
            });
        }
    }

    /// parallel_for over the positions of a random-access range; body
    /// receives each element by reference. The range must outlive the
    /// pushed tasks.
    template <std::ranges::random_access_range Range, class Body>
    void parallel_for_each(Range& items, Body&& body, std::size_t n_batches = 0) {
        auto first = std::ranges::begin(items);
        const auto n = static_cast<std::ptrdiff_t>(std::ranges::distance(items));
        parallel_for(
            0, n,
            [first, f = std::forward<Body>(body)](std::ptrdiff_t i) mutable { f(first[i]); },
            n_batches);
    }

    /// Blocks until the queue is empty and no task is running, pumping on
    /// the host. Then raises Interrupted if flagged, or TaskFailed carrying
    /// the first captured error (which is cleared). The pool stays usable.
    void wait();

    /// wait(), then retires and joins all workers. Throws AlreadyJoined on a
    /// second call; workers are retired even if wait() raised.
    void join();

private:
    struct Task {
        std::function<void()> run;
        std::function<void(std::exception_ptr)> discard;
    };

    template <class Function, class... Args>
    static auto bind(Function&& f, Args&&... args) {
        return [fn = std::forward<Function>(f),
                tup = std::make_tuple(std::forward<Args>(args)...)]() mutable {
            return std::apply(fn, tup);
        };
    }

    void enqueue(Task task);
    void execute(Task& task);
    void worker_loop();
    bool idle() const { return queue_.empty() && busy_ == 0; }
    void stop_workers() noexcept;
    void finish_wait();

    const std::size_t n_workers_;
    std::vector<std::thread> workers_;

    mutable std::mutex mutex_;
    std::condition_variable work_cv_;
    std::condition_variable idle_cv_;
    std::deque<Task> queue_;
    std::size_t busy_ = 0;
    bool stopped_ = false;
    std::exception_ptr first_error_;

    std::atomic<bool> join_called_{false};
    std::chrono::milliseconds pump_interval_ = default_pump_interval;
};

} // namespace tether
