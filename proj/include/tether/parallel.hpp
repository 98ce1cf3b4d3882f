#pragma once

#include <cstddef>
#include <ranges>
#include <utility>

#include "tether/batch.hpp"
#include "tether/pool.hpp"

namespace tether {

/// Calls body(i) for every i in [begin, end) on a fresh pool of n_workers
/// and joins it. Iterations are grouped into n_batches tasks (0 = auto).
///
/// Bodies run concurrently; writes must go to disjoint locations or be
/// synchronized by the caller. Call from the host thread.
template <class Body>
void parallel_for(std::ptrdiff_t begin, std::ptrdiff_t end, Body&& body,
                  std::size_t n_workers = hardware_workers(), std::size_t n_batches = 0) {
    ThreadPool pool(n_workers);
    pool.parallel_for(begin, end, std::forward<Body>(body), n_batches);
    pool.join();
}

/// Applies body to every element of a random-access range in place.
template <std::ranges::random_access_range Range, class Body>
void parallel_for_each(Range& items, Body&& body, std::size_t n_workers = hardware_workers(),
                       std::size_t n_batches = 0) {
    ThreadPool pool(n_workers);
    pool.parallel_for_each(items, std::forward<Body>(body), n_batches);
    pool.join();
}

} // namespace tether
