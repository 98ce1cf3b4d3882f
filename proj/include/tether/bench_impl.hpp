#pragma once

#include <algorithm>
#include <chrono>
#include <vector>

namespace tether::bench {

template <class Fn>
Timing measure(std::size_t reps, Fn&& fn) {
    using clock = std::chrono::steady_clock;
    fn();  // warm-up
    std::vector<std::uint64_t> samples;
    samples.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        const auto start = clock::now();
        fn();
        const auto stop = clock::now();
        samples.push_back(static_cast<std::uint64_t>(
            std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count()));
    }
    Timing t;
    if (samples.empty()) return t;
    t.min = *std::min_element(samples.begin(), samples.end());
    auto mid = samples.begin() + static_cast<std::ptrdiff_t>(samples.size() / 2);
    std::nth_element(samples.begin(), mid, samples.end());
    t.median = *mid;
    return t;
}

} // namespace tether::bench
