#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tether/errors.hpp"

namespace tether::bench {

enum class Workload { empty_jobs, thread_spawn, interrupt_check, kde, kendall };

enum class Scheduler {
    sequential,
    raw_threads,
    guest_threads,
    host_thread,
    child_thread,
    pool,
    parallel_for,
};

std::string_view to_string(Workload w) noexcept;
std::string_view to_string(Scheduler s) noexcept;
std::optional<Workload> parse_workload(std::string_view name) noexcept;

/// One CSV row. nanos_* is the wall time of one repetition of the whole
/// workload of size n (e.g. all n interrupt checks, all n thread
/// round-trips); divide by n for per-item cost.
struct BenchRecord {
    Workload workload{};
    Scheduler scheduler{};
    std::uint64_t n = 0;
    std::uint64_t d = 0;
    std::uint64_t workers = 0;
    std::uint64_t batches = 0;
    std::uint64_t reps = 0;
    std::uint64_t nanos_median = 0;
    std::uint64_t nanos_min = 0;
    std::uint64_t seed = 0;
};

struct BenchConfig {
    std::vector<Workload> workloads;
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> workers;
    std::size_t batches = 0;  // 0 = automatic
    std::size_t reps = 5;
    std::uint64_t seed = 42;
    std::string out_path;     // empty = standard output
};

inline constexpr std::size_t min_reps = 3;
inline constexpr std::string_view csv_header =
    "workload,scheduler,n,d,workers,batches,reps,nanos_median,nanos_min,seed";
inline constexpr std::string_view rng_name = "mt19937_64";

/// Default grid for a workload when the user gives none.
std::vector<std::size_t> default_sizes(Workload w);
std::vector<std::size_t> default_dims(Workload w);

/// Throws std::invalid_argument on empty grids, zero sizes, zero worker
/// counts or reps < 3. Dims are only required for kde and kendall.
void validate(const BenchConfig& config);

struct Timing {
    std::uint64_t median = 0;
    std::uint64_t min = 0;
};

/// Nanosecond timings of `reps` calls after one discarded warm-up call.
template <class Fn>
Timing measure(std::size_t reps, Fn&& fn);

std::vector<BenchRecord> bench_empty(const BenchConfig& config);
std::vector<BenchRecord> bench_thread_spawn(const BenchConfig& config);
std::vector<BenchRecord> bench_interrupt(const BenchConfig& config);
std::vector<BenchRecord> bench_kde(const BenchConfig& config);
std::vector<BenchRecord> bench_kendall(const BenchConfig& config);

/// Runs every selected workload in order.
std::vector<BenchRecord> run(const BenchConfig& config);

void write_csv(std::ostream& os, std::span<const BenchRecord> records);

/// d columns of n standard-normal draws from mt19937_64(seed).
std::vector<std::vector<double>> normal_columns(std::size_t d, std::size_t n, std::uint64_t seed);

/// Throws OutputMismatch unless expected == actual.
template <class T>
void require_same_output(const T& expected, const T& actual, std::string_view what) {
    if (!(expected == actual)) {
        throw OutputMismatch(std::string(what) + ": parallel output differs from sequential");
    }
}

} // namespace tether::bench

#include "tether/bench_impl.hpp"
