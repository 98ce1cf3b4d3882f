#pragma once

// Statistical workloads used by the benchmarks: Gaussian kernel density
// estimation and Kendall's tau-b (quadratic reference and Knight's
// O(n log n) merge-sort method), plus a pool-driven correlation matrix.

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "tether/errors.hpp"
#include "tether/pool.hpp"

namespace tether::kernels {

struct DensityEstimate {
    std::vector<double> grid;
    std::vector<double> density;
    double bandwidth = 0.0;

    friend bool operator==(const DensityEstimate&, const DensityEstimate&) = default;
};

inline constexpr std::size_t default_grid_points = 500;

/// 0.9 * min(sd, IQR / 1.349) * n^(-1/5). Falls back to sd when the IQR is
/// zero. Throws DegenerateSample if n < 2 or all values are identical.
double silverman_bandwidth(std::span<const double> x);

/// Gaussian KDE on n_grid equally spaced points spanning
/// [min(x) - 3h, max(x) + 3h]. Bandwidth defaults to Silverman's rule.
DensityEstimate kde_gauss(std::span<const double> x, std::size_t n_grid = default_grid_points,
                          std::optional<double> bandwidth = std::nullopt);

/// Trapezoid rule over an estimate's grid.
double trapezoid_integral(const DensityEstimate& est);

/// Kendall's tau-b by enumerating all pairs. O(n^2).
double kendall_tau_brute(std::span<const double> x, std::span<const double> y);

/// Kendall's tau-b via Knight's algorithm: sort by (x, y), count the
/// exchanges a merge sort needs to order y, and correct for ties.
/// O(n log n).
double kendall_tau_knight(std::span<const double> x, std::span<const double> y);

/// Dense symmetric d x d matrix, row-major.
class CorrelationMatrix {
public:
    CorrelationMatrix() = default;
    explicit CorrelationMatrix(std::size_t dim) : dim_(dim), values_(dim * dim, 0.0) {}

    std::size_t dim() const noexcept { return dim_; }
    double& operator()(std::size_t i, std::size_t j) { return values_[i * dim_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return values_[i * dim_ + j]; }
    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const CorrelationMatrix&, const CorrelationMatrix&) = default;

private:
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

using Columns = std::span<const std::vector<double>>;

/// Plain double loop over i < j.
CorrelationMatrix kendall_matrix_sequential(Columns data);

/// One pool task per row i, each computing tau(i, j) for all j > i. Rows
/// with small i carry more work. Waits on the pool before returning.
CorrelationMatrix kendall_matrix(Columns data, ThreadPool& pool);

/// Same outer loop run through ThreadPool::parallel_for (n_batches = 0 for
/// the automatic count). Waits on the pool before returning.
CorrelationMatrix kendall_matrix_batched(Columns data, ThreadPool& pool,
                                         std::size_t n_batches = 0);

} // namespace tether::kernels
