#include "tether/batch.hpp"

#include <algorithm>
#include <stdexcept>

namespace tether {

std::size_t auto_batch_count(std::size_t n_iterations, std::size_t n_workers) noexcept {
    const std::size_t wanted = batches_per_worker * std::max<std::size_t>(n_workers, 1);
    return std::clamp<std::size_t>(wanted, 1, std::max<std::size_t>(n_iterations, 1));
}

BatchPlan make_batch_plan(std::ptrdiff_t begin, std::ptrdiff_t end, std::size_t n_batches) {
    if (begin > end) throw std::invalid_argument("batch plan: begin > end");

    const auto n = static_cast<std::size_t>(end - begin);
    const std::size_t k = std::clamp<std::size_t>(n_batches, 1, std::max<std::size_t>(n, 1));
    const std::size_t base = n / k;
    const std::size_t extra = n % k;

    BatchPlan plan;
    plan.begin = begin;
    plan.end = end;
    plan.boundaries.reserve(k + 1);
    plan.boundaries.push_back(begin);
    std::ptrdiff_t at = begin;
    for (std::size_t b = 0; b < k; ++b) {
        at += static_cast<std::ptrdiff_t>(base + (b < extra ? 1 : 0));
        plan.boundaries.push_back(at);
    }
    return plan;
}

} // namespace tether
