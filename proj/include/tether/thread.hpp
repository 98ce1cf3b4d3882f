#pragma once

#include <chrono>
#include <future>
#include <system_error>
#include <thread>
#include <tuple>
#include <type_traits>
#include <utility>

#include "tether/errors.hpp"
#include "tether/host_sync.hpp"
#include "tether/pump.hpp"

namespace tether {

/// A std::thread whose join() keeps the host responsive: while waiting it
/// releases buffered messages and polls for interruptions every
/// pump_interval.
///
/// Interruption is cooperative. join() stops pumping once an interruption is
/// observed but still joins the worker, so a body that never calls
/// check_interrupt() runs to completion before join() raises Interrupted.
///
/// Joining from a thread other than the host does not pump; it is a plain
/// blocking join. A detached GuestThread is never pumped, which is why
/// detaching threads that print is discouraged.
class GuestThread {
public:
    GuestThread() noexcept = default;

    template <class Function, class... Args>
        requires std::is_invocable_v<std::decay_t<Function>, std::decay_t<Args>...>
    explicit GuestThread(Function&& body, Args&&... args)
    {
        auto bound = [f = std::forward<Function>(body),
                      tup = std::make_tuple(std::forward<Args>(args)...)]() mutable {
            std::apply(f, tup);
        };
        std::packaged_task<void()> task(std::move(bound));
        completion_ = task.get_future();
        try {
            inner_ = std::thread(std::move(task));
        } catch (const std::system_error& e) {
            completion_ = {};
            throw SpawnFailure(e.what());
        }
    }

    GuestThread(GuestThread&&) noexcept = default;

    GuestThread& operator=(GuestThread&& other) noexcept {
        if (this != &other) {
            quiet_join();
            inner_ = std::move(other.inner_);
            completion_ = std::move(other.completion_);
            pump_interval_ = other.pump_interval_;
        }
        return *this;
    }

    /// Blocks without pumping if still joinable; errors are dropped. On the
    /// host the buffer is flushed afterwards, so a guest destroyed while an
    /// exception unwinds still gets its messages out.
    ~GuestThread() {
        const bool was_running = joinable();
        quiet_join();
        if (was_running && is_host_thread()) {
            try {
                flush();
            } catch (...) {
            }
        }
    }

    bool joinable() const noexcept { return inner_.joinable(); }
    std::thread::id get_id() const noexcept { return inner_.get_id(); }

    std::chrono::milliseconds pump_interval() const noexcept { return pump_interval_; }
    void set_pump_interval(std::chrono::milliseconds interval) noexcept {
        pump_interval_ = interval;
    }

    void join() {
        if (!joinable()) throw NotJoinable();

        if (!is_host_thread()) {
            inner_.join();
            claim_result();
            return;
        }

        pump_until([this](auto d) { return completion_.wait_for(d) == std::future_status::ready; },
                   pump_interval_);
        inner_.join();
        flush();
        check_interrupt();
        claim_result();
    }

    void detach() {
        if (!joinable()) throw NotJoinable();
        inner_.detach();
        completion_ = {};
    }

    void swap(GuestThread& other) noexcept {
        std::swap(inner_, other.inner_);
        std::swap(completion_, other.completion_);
        std::swap(pump_interval_, other.pump_interval_);
    }

private:
    void claim_result() {
        auto done = std::move(completion_);
        try {
            done.get();
        } catch (const Interrupted&) {
            throw;
        } catch (...) {
            throw TaskFailed(std::current_exception());
        }
    }

    void quiet_join() noexcept {
        if (inner_.joinable()) inner_.join();
        completion_ = {};
    }

    std::thread inner_;
    std::future<void> completion_;
    std::chrono::milliseconds pump_interval_ = default_pump_interval;
};

inline void swap(GuestThread& a, GuestThread& b) noexcept { a.swap(b); }

} // namespace tether
