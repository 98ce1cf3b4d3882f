#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace tether {

/// Contiguous, balanced split of the half-open range [begin, end).
///
/// boundaries holds n_batches + 1 monotone indices starting at begin and
/// ending at end; batch k covers [boundaries[k], boundaries[k + 1]). Sizes
/// differ by at most one, larger batches first. An empty range yields a
/// single empty batch.
struct BatchPlan {
    std::ptrdiff_t begin = 0;
    std::ptrdiff_t end = 0;
    std::vector<std::ptrdiff_t> boundaries;

    std::size_t n_batches() const noexcept {
        return boundaries.empty() ? 0 : boundaries.size() - 1;
    }
    std::ptrdiff_t batch_begin(std::size_t k) const { return boundaries[k]; }
    std::ptrdiff_t batch_end(std::size_t k) const { return boundaries[k + 1]; }
};

/// Batches per worker used by the automatic heuristic.
inline constexpr std::size_t batches_per_worker = 8;

/// clamp(8 * max(n_workers, 1), 1, max(n_iterations, 1)).
std::size_t auto_batch_count(std::size_t n_iterations, std::size_t n_workers) noexcept;

/// Requested counts are clamped to [1, max(1, end - begin)]. Throws
/// std::invalid_argument if begin > end.
BatchPlan make_batch_plan(std::ptrdiff_t begin, std::ptrdiff_t end, std::size_t n_batches);

} // namespace tether
