#include "tether/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace tether::kernels {

namespace {

void require_finite(std::span<const double> x, const char* what) {
    for (double v : x) {
        if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + ": non-finite value");
    }
}

void require_pair(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw LengthMismatch("kendall tau: samples differ in length (" +
                             std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
    }
    if (x.size() < 2) throw std::invalid_argument("kendall tau: need at least two observations");
    require_finite(x, "kendall tau");
    require_finite(y, "kendall tau");
}

// R's default (type 7) quantile on sorted data.
double quantile_sorted(const std::vector<double>& sorted, double p) {
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

constexpr double inv_sqrt_2pi = 0.3989422804014327;

double tau_b(std::int64_t numerator, std::uint64_t n0, std::uint64_t x_ties,
             std::uint64_t y_ties) {
    if (n0 == x_ties || n0 == y_ties) {
        throw AllTied("kendall tau: every pair is tied in one of the samples");
    }
    return static_cast<double>(numerator) /
           std::sqrt(static_cast<double>(n0 - x_ties) * static_cast<double>(n0 - y_ties));
}

std::uint64_t tied_pairs_in_runs(std::span<const double> sorted) {
    std::uint64_t total = 0;
    std::uint64_t run = 1;
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        if (sorted[i] == sorted[i - 1]) {
            ++run;
        } else {
            total += run * (run - 1) / 2;
            run = 1;
        }
    }
    return total + run * (run - 1) / 2;
}

// Sorts v ascending and returns the number of exchanges of adjacent
// elements a stable sort would perform (pairs with v[i] > v[j], i < j).
std::uint64_t merge_sort_exchanges(std::span<double> v, std::span<double> buf) {
    const std::size_t n = v.size();
    if (n < 2) return 0;
    if (n <= 16) {
        std::uint64_t swaps = 0;
        for (std::size_t i = 1; i < n; ++i) {
            const double val = v[i];
            std::size_t j = i;
            while (j > 0 && v[j - 1] > val) {
                v[j] = v[j - 1];
                --j;
            }
            v[j] = val;
            swaps += i - j;
        }
        return swaps;
    }

    const std::size_t half = n / 2;
    std::uint64_t swaps = merge_sort_exchanges(v.first(half), buf.first(half)) +
                          merge_sort_exchanges(v.subspan(half), buf.subspan(half));

    std::size_t l = 0, r = half, out = 0;
    while (l < half && r < n) {
        if (v[r] < v[l]) {
            buf[out++] = v[r++];
            swaps += half - l;
        } else {
            buf[out++] = v[l++];
        }
    }
    while (l < half) buf[out++] = v[l++];
    while (r < n) buf[out++] = v[r++];
    std::copy(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(n), v.begin());
    return swaps;
}

void fill_row(Columns data, CorrelationMatrix& m, std::size_t i) {
    m(i, i) = 1.0;
    for (std::size_t j = i + 1; j < data.size(); ++j) {
        const double tau = kendall_tau_knight(data[i], data[j]);
        m(i, j) = tau;
        m(j, i) = tau;
    }
}

void require_columns(Columns data) {
    if (data.size() < 2) throw std::invalid_argument("kendall matrix: need at least two columns");
    for (const auto& col : data) {
        if (col.size() != data.front().size()) {
            throw LengthMismatch("kendall matrix: columns differ in length");
        }
    }
}

} // namespace

double silverman_bandwidth(std::span<const double> x) {
    const std::size_t n = x.size();
    if (n < 2) throw DegenerateSample("bandwidth: need at least two observations");
    require_finite(x, "bandwidth");

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(n);
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));

    std::vector<double> sorted(x.begin(), x.end());
    std::sort(sorted.begin(), sorted.end());
    const double iqr = quantile_sorted(sorted, 0.75) - quantile_sorted(sorted, 0.25);

    double spread = std::min(sd, iqr / 1.349);
    if (!(spread > 0.0)) spread = sd;
    if (!(spread > 0.0)) throw DegenerateSample("bandwidth: all values are identical");
    return 0.9 * spread * std::pow(static_cast<double>(n), -0.2);
}

DensityEstimate kde_gauss(std::span<const double> x, std::size_t n_grid,
                          std::optional<double> bandwidth) {
    if (x.empty()) throw std::invalid_argument("kde: empty sample");
    if (n_grid < 2) throw std::invalid_argument("kde: need at least two grid points");
    require_finite(x, "kde");

    const double h = bandwidth ? *bandwidth : silverman_bandwidth(x);
    if (!(h > 0.0) || !std::isfinite(h)) throw std::invalid_argument("kde: bandwidth must be positive");

    const auto [lo_it, hi_it] = std::minmax_element(x.begin(), x.end());
    const double lo = *lo_it - 3.0 * h;
    const double hi = *hi_it + 3.0 * h;
    const double step = (hi - lo) / static_cast<double>(n_grid - 1);

    DensityEstimate est;
    est.bandwidth = h;
    est.grid.resize(n_grid);
    est.density.resize(n_grid);
    const double scale = inv_sqrt_2pi / (static_cast<double>(x.size()) * h);
    for (std::size_t g = 0; g < n_grid; ++g) {
        const double at = lo + static_cast<double>(g) * step;
        double sum = 0.0;
        for (double v : x) {
            const double z = (at - v) / h;
            sum += std::exp(-0.5 * z * z);
        }
        est.grid[g] = at;
        est.density[g] = scale * sum;
    }
    return est;
}

double trapezoid_integral(const DensityEstimate& est) {
    double total = 0.0;
    for (std::size_t g = 1; g < est.grid.size(); ++g) {
        total += 0.5 * (est.density[g] + est.density[g - 1]) * (est.grid[g] - est.grid[g - 1]);
    }
    return total;
}

double kendall_tau_brute(std::span<const double> x, std::span<const double> y) {
    require_pair(x, y);
    const std::size_t n = x.size();

    std::int64_t balance = 0;
    std::uint64_t x_ties = 0, y_ties = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double dx = x[i] - x[j];
            const double dy = y[i] - y[j];
            if (dx == 0.0) ++x_ties;
            if (dy == 0.0) ++y_ties;
            if (dx == 0.0 || dy == 0.0) continue;
            balance += ((dx > 0.0) == (dy > 0.0)) ? 1 : -1;
        }
    }
    const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    return tau_b(balance, n0, x_ties, y_ties);
}

double kendall_tau_knight(std::span<const double> x, std::span<const double> y) {
    require_pair(x, y);
    const std::size_t n = x.size();

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
    });

    std::vector<double> xs(n), ys(n);
    for (std::size_t k = 0; k < n; ++k) {
        xs[k] = x[order[k]];
        ys[k] = y[order[k]];
    }

    const std::uint64_t x_ties = tied_pairs_in_runs(xs);

    std::uint64_t joint_ties = 0;
    std::uint64_t run = 1;
    for (std::size_t k = 1; k < n; ++k) {
        if (xs[k] == xs[k - 1] && ys[k] == ys[k - 1]) {
            ++run;
        } else {
            joint_ties += run * (run - 1) / 2;
            run = 1;
        }
    }
    joint_ties += run * (run - 1) / 2;

    std::vector<double> buf(n);
    const std::uint64_t exchanges = merge_sort_exchanges(ys, buf);
    const std::uint64_t y_ties = tied_pairs_in_runs(ys);

    const std::uint64_t n0 = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const std::int64_t balance = static_cast<std::int64_t>(n0 + joint_ties) -
                                 static_cast<std::int64_t>(x_ties + y_ties) -
                                 2 * static_cast<std::int64_t>(exchanges);
    return tau_b(balance, n0, x_ties, y_ties);
}

CorrelationMatrix kendall_matrix_sequential(Columns data) {
    require_columns(data);
    CorrelationMatrix m(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) fill_row(data, m, i);
    return m;
}

CorrelationMatrix kendall_matrix(Columns data, ThreadPool& pool) {
    require_columns(data);
    CorrelationMatrix m(data.size());
    for (std::size_t i = 0; i < data.size(); ++i) {
        pool.push([data, &m, i] { fill_row(data, m, i); });
    }
    pool.wait();
    return m;
}

CorrelationMatrix kendall_matrix_batched(Columns data, ThreadPool& pool, std::size_t n_batches) {
    require_columns(data);
    CorrelationMatrix m(data.size());
    pool.parallel_for(
        0, static_cast<std::ptrdiff_t>(data.size()),
        [data, &m](std::ptrdiff_t i) { fill_row(data, m, static_cast<std::size_t>(i)); },
        n_batches);
    pool.wait();
    return m;
}

} // namespace tether::kernels
