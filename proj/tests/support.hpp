#pragma once

#include <mutex>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "tether/host_sync.hpp"

namespace tether::testing {

/// Sink that records every write together with the writing thread.
class RecordingSink {
public:
    struct Write {
        std::string text;
        std::thread::id writer;
    };

    OutputSink sink() {
        return [this](std::string_view msg) {
            std::lock_guard lock(mutex_);
            writes_.push_back({std::string(msg), std::this_thread::get_id()});
        };
    }

    std::vector<Write> writes() const {
        std::lock_guard lock(mutex_);
        return writes_;
    }

    std::string text() const {
        std::lock_guard lock(mutex_);
        std::string all;
        for (const auto& w : writes_) all += w.text;
        return all;
    }

    std::size_t count() const {
        std::lock_guard lock(mutex_);
        return writes_.size();
    }

    void clear() {
        std::lock_guard lock(mutex_);
        writes_.clear();
    }

private:
    mutable std::mutex mutex_;
    std::vector<Write> writes_;
};

/// Fresh host context per test: programmatic trigger and a recording sink.
struct HostFixture {
    InterruptTrigger trigger;
    RecordingSink output;

    HostFixture() { init_host(trigger.source(), output.sink()); }
};

inline std::vector<std::string> split_lines(const std::string& text) {
    std::vector<std::string> lines;
    std::size_t start = 0;
    while (start < text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string::npos) {
            lines.push_back(text.substr(start));
            break;
        }
        lines.push_back(text.substr(start, nl - start));
        start = nl + 1;
    }
    return lines;
}

} // namespace tether::testing
