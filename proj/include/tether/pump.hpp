#pragma once

#include <chrono>

#include "tether/host_sync.hpp"

namespace tether {

inline constexpr std::chrono::milliseconds default_pump_interval{250};

/// Runs the host pump loop: wait up to `interval` for `wait_ready`, and on
/// every timeout release buffered messages and poll for an interruption.
/// Returns true if the wait completed, false if an interruption cut it short.
///
/// `wait_ready(interval)` must block for at most `interval` and return
/// whether the awaited condition holds.
template <class WaitReady>
bool pump_until(WaitReady&& wait_ready, std::chrono::milliseconds interval) {
    while (!wait_ready(interval)) {
        flush();
        if (is_interrupted()) return false;
    }
    return true;
}

} // namespace tether
