#pragma once

// Process-global synchronization with a single-threaded host.
//
// Exactly one thread (the one that calls init_host) is the host. Only the
// host writes to the output sink and polls the interrupt source. Every other
// thread buffers its messages and reads a global interrupt flag that the host
// sets once it notices an interruption.
//
// The flag is NOT cleared automatically. Embedders must call
// reset_interrupt() between independent top-level operations, otherwise a
// stale interruption aborts the next call.

#include <atomic>
#include <chrono>
#include <csignal>
#include <deque>
#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <thread>

#include "tether/errors.hpp"

namespace tether {

/// Predicate polled on the host thread; true means "the user asked to stop".
using InterruptSource = std::function<bool()>;

/// Byte-stream destination. Invoked only from the host thread. Throw to
/// report a failed write.
using OutputSink = std::function<void(std::string_view)>;

/// Writes to standard output and flushes after every message.
OutputSink stdout_sink();

/// A source that never fires.
InterruptSource never_interrupted();

namespace detail {

// Set once, on the host thread, by the first init. Host identity never
// changes afterwards, so a thread-local bool answers "am I the host?".
inline constinit thread_local bool on_host_thread = false;

inline constinit std::atomic<bool> interrupt_flag{false};

[[noreturn]] void throw_interrupted();

} // namespace detail

class HostContext {
public:
    static HostContext& instance();

    HostContext(const HostContext&) = delete;
    HostContext& operator=(const HostContext&) = delete;

    /// Makes the calling thread the host. Calling again from the host resets
    /// the flag and drops buffered messages; from any other thread it throws
    /// AlreadyInitializedElsewhere.
    void init(InterruptSource source, OutputSink sink);

    bool is_initialized() const noexcept;
    bool is_host_thread() const noexcept { return detail::on_host_thread; }
    std::thread::id host_thread_id() const noexcept;

    void print(std::string_view msg);
    void flush();

    /// Host: polls the source and raises the flag if it fired. Other
    /// threads: reads the flag only, touching no lock.
    bool is_interrupted(bool condition = true) {
        if (!condition) return false;
        if (!detail::on_host_thread) return detail::interrupt_flag.load(std::memory_order_seq_cst);
        return poll_source();
    }

    void check_interrupt(bool condition = true) {
        if (is_interrupted(condition)) detail::throw_interrupted();
    }

    void reset_interrupt();

    /// Current value of the global flag, without polling the source.
    bool interrupt_flag() const noexcept {
        return detail::interrupt_flag.load(std::memory_order_seq_cst);
    }

    std::size_t buffered() const;

    /// Holds the message buffer's mutex. Diagnostic hook used to verify that
    /// child-side interrupt checks never touch the buffer.
    [[nodiscard]] std::unique_lock<std::mutex> lock_buffer() const;

private:
    HostContext() = default;

    bool poll_source();

    std::atomic<std::thread::id> host_id_{};

    mutable std::mutex buffer_mutex_;
    std::deque<std::string> buffer_;

    // Guards source_ and sink_. Only the host reads them, but init may swap
    // them while a stale guest is still alive.
    mutable std::mutex config_mutex_;
    InterruptSource source_;
    OutputSink sink_;
};

// Free-function surface over HostContext::instance().

HostContext& init_host(InterruptSource source = never_interrupted(),
                       OutputSink sink = stdout_sink());
inline bool is_host_thread() noexcept { return detail::on_host_thread; }
void print(std::string_view msg);
void flush();
inline bool is_interrupted(bool condition = true) {
    if (!condition) return false;
    if (!detail::on_host_thread) return detail::interrupt_flag.load(std::memory_order_seq_cst);
    return HostContext::instance().is_interrupted(true);
}
inline void check_interrupt(bool condition = true) {
    if (is_interrupted(condition)) detail::throw_interrupted();
}
void reset_interrupt();

/// Programmatic interrupt source, mainly for tests and embedders that
/// signal cancellation from their own code.
class InterruptTrigger {
public:
    InterruptTrigger() : fired_(std::make_shared<std::atomic<bool>>(false)) {}

    void fire() noexcept { fired_->store(true); }
    void clear() noexcept { fired_->store(false); }
    bool fired() const noexcept { return fired_->load(); }

    /// The returned source shares state with this trigger and outlives it.
    InterruptSource source() const {
        return [state = fired_] { return state->load(); };
    }

private:
    std::shared_ptr<std::atomic<bool>> fired_;
};

/// Installs a handler for `signum` (SIGINT by default) and returns a source
/// that fires once per delivered signal. A second signal arriving while the
/// first is still unconsumed restores the default disposition and re-raises,
/// terminating the process.
InterruptSource install_signal_source(int signum = SIGINT);

/// Restores the disposition that was active before install_signal_source.
void uninstall_signal_source();

} // namespace tether
