#include "tether/host_sync.hpp"

#include <cstdio>
#include <utility>

namespace tether {

OutputSink stdout_sink() {
    return [](std::string_view msg) {
        if (msg.empty()) return;
        if (std::fwrite(msg.data(), 1, msg.size(), stdout) != msg.size() ||
            std::fflush(stdout) != 0) {
            throw SinkError("failed to write to standard output");
        }
    };
}

InterruptSource never_interrupted() {
    return [] { return false; };
}

HostContext& HostContext::instance() {
    static HostContext ctx;
    return ctx;
}

void HostContext::init(InterruptSource source, OutputSink sink) {
    const auto self = std::this_thread::get_id();
    const auto current = host_id_.load();
    if (current != std::thread::id{} && current != self) {
        throw AlreadyInitializedElsewhere();
    }
    {
        std::lock_guard lock(config_mutex_);
        source_ = source ? std::move(source) : never_interrupted();
        sink_ = sink ? std::move(sink) : stdout_sink();
    }
    {
        std::lock_guard lock(buffer_mutex_);
        buffer_.clear();
    }
    detail::interrupt_flag.store(false);
    host_id_.store(self);
    detail::on_host_thread = true;
}

bool HostContext::is_initialized() const noexcept {
    return host_id_.load(std::memory_order_acquire) != std::thread::id{};
}

std::thread::id HostContext::host_thread_id() const noexcept {
    return host_id_.load(std::memory_order_acquire);
}

void HostContext::print(std::string_view msg) {
    {
        std::lock_guard lock(buffer_mutex_);
        buffer_.emplace_back(msg);
    }
    if (is_host_thread()) flush();
}

void HostContext::flush() {
    if (!is_host_thread()) return;

    std::deque<std::string> pending;
    {
        std::lock_guard lock(buffer_mutex_);
        pending.swap(buffer_);
    }
    if (pending.empty()) return;

    OutputSink sink;
    {
        std::lock_guard lock(config_mutex_);
        sink = sink_;
    }
    while (!pending.empty()) {
        try {
            sink(pending.front());
        } catch (...) {
            // Put undelivered messages back in front of anything enqueued
            // meanwhile so a later flush keeps FIFO order.
            {
                std::lock_guard lock(buffer_mutex_);
                buffer_.insert(buffer_.begin(), std::make_move_iterator(pending.begin()),
                               std::make_move_iterator(pending.end()));
            }
            try {
                throw;
            } catch (const SinkError&) {
                throw;
            } catch (const std::exception& e) {
                throw SinkError(e.what());
            } catch (...) {
                throw SinkError("output sink failed");
            }
        }
        pending.pop_front();
    }
}

bool HostContext::poll_source() {
    bool fired;
    {
        std::lock_guard lock(config_mutex_);
        fired = source_ && source_();
    }
    if (fired) detail::interrupt_flag.store(true, std::memory_order_seq_cst);
    return detail::interrupt_flag.load(std::memory_order_seq_cst);
}

void detail::throw_interrupted() { throw Interrupted(); }

void HostContext::reset_interrupt() {
    if (!is_host_thread()) throw NotHostThread("reset_interrupt");
    detail::interrupt_flag.store(false, std::memory_order_seq_cst);
}

std::size_t HostContext::buffered() const {
    std::lock_guard lock(buffer_mutex_);
    return buffer_.size();
}

std::unique_lock<std::mutex> HostContext::lock_buffer() const {
    return std::unique_lock(buffer_mutex_);
}

HostContext& init_host(InterruptSource source, OutputSink sink) {
    auto& ctx = HostContext::instance();
    ctx.init(std::move(source), std::move(sink));
    return ctx;
}

void print(std::string_view msg) { HostContext::instance().print(msg); }
void flush() { HostContext::instance().flush(); }
void reset_interrupt() { HostContext::instance().reset_interrupt(); }

// Signal adapter.

namespace {

volatile std::sig_atomic_t g_signal_pending = 0;
int g_signal_number = 0;
struct sigaction g_previous_action {};
bool g_installed = false;

extern "C" void on_interrupt_signal(int signum) {
    if (g_signal_pending) {
        std::signal(signum, SIG_DFL);
        std::raise(signum);
        return;
    }
    g_signal_pending = 1;
}

} // namespace

InterruptSource install_signal_source(int signum) {
    if (g_installed) uninstall_signal_source();
    struct sigaction action {};
    action.sa_handler = on_interrupt_signal;
    sigemptyset(&action.sa_mask);
    action.sa_flags = SA_RESTART;
    if (sigaction(signum, &action, &g_previous_action) != 0) {
        throw std::runtime_error("sigaction failed");
    }
    g_signal_number = signum;
    g_signal_pending = 0;
    g_installed = true;
    return [] {
        if (!g_signal_pending) return false;
        g_signal_pending = 0;
        return true;
    };
}

void uninstall_signal_source() {
    if (!g_installed) return;
    sigaction(g_signal_number, &g_previous_action, nullptr);
    g_installed = false;
    g_signal_pending = 0;
}

} // namespace tether
