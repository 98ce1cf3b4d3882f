#include "tether/bench.hpp"

#include <ostream>
#include <random>
#include <stdexcept>
#include <thread>

#include "tether/kernels.hpp"
#include "tether/parallel.hpp"
#include "tether/pool.hpp"
#include "tether/thread.hpp"

namespace tether::bench {

namespace {

// Keeps the optimizer from deleting empty job bodies.
inline void do_not_optimize() { asm volatile("" ::: "memory"); }

void empty_job() { do_not_optimize(); }

BenchRecord record(const BenchConfig& cfg, Workload w, Scheduler s, std::size_t n,
                   std::size_t d, std::size_t workers, std::size_t batches, Timing t) {
    BenchRecord r;
    r.workload = w;
    r.scheduler = s;
    r.n = n;
    r.d = d;
    r.workers = workers;
    r.batches = batches;
    r.reps = cfg.reps;
    r.nanos_median = t.median;
    r.nanos_min = t.min;
    r.seed = cfg.seed;
    return r;
}

} // namespace

std::string_view to_string(Workload w) noexcept {
    switch (w) {
    case Workload::empty_jobs: return "empty_jobs";
    case Workload::thread_spawn: return "thread_spawn";
    case Workload::interrupt_check: return "interrupt_check";
    case Workload::kde: return "kde";
    case Workload::kendall: return "kendall";
    }
    return "unknown";
}

std::string_view to_string(Scheduler s) noexcept {
    switch (s) {
    case Scheduler::sequential: return "sequential";
    case Scheduler::raw_threads: return "raw_threads";
    case Scheduler::guest_threads: return "guest_threads";
    case Scheduler::host_thread: return "host_thread";
    case Scheduler::child_thread: return "child_thread";
    case Scheduler::pool: return "pool";
    case Scheduler::parallel_for: return "parallel_for";
    }
    return "unknown";
}

std::optional<Workload> parse_workload(std::string_view name) noexcept {
    for (auto w : {Workload::empty_jobs, Workload::thread_spawn, Workload::interrupt_check,
                   Workload::kde, Workload::kendall}) {
        if (to_string(w) == name) return w;
    }
    return std::nullopt;
}

std::vector<std::size_t> default_sizes(Workload w) {
    switch (w) {
    case Workload::empty_jobs: return {1000, 10000, 100000};
    case Workload::thread_spawn: return {1, 2, 4, 8, 16};
    case Workload::interrupt_check: return {1000000};
    case Workload::kde: return {100, 1000};
    case Workload::kendall: return {100, 500, 1000};
    }
    return {};
}

std::vector<std::size_t> default_dims(Workload w) {
    switch (w) {
    case Workload::kde: return {10, 100};
    case Workload::kendall: return {10, 100};
    default: return {};
    }
}

void validate(const BenchConfig& cfg) {
    if (cfg.workloads.empty()) throw std::invalid_argument("no workload selected");
    if (cfg.sizes.empty()) throw std::invalid_argument("size grid is empty");
    for (auto n : cfg.sizes) {
        if (n == 0) throw std::invalid_argument("sizes must be positive");
    }
    if (cfg.workers.empty()) throw std::invalid_argument("worker grid is empty");
    for (auto w : cfg.workers) {
        if (w == 0) throw std::invalid_argument("worker counts must be positive");
    }
    if (cfg.reps < min_reps) throw std::invalid_argument("reps must be at least 3");
    for (auto w : cfg.workloads) {
        if (w != Workload::kde && w != Workload::kendall) continue;
        if (cfg.dims.empty()) throw std::invalid_argument("dimension grid is empty");
        for (auto d : cfg.dims) {
            if (d == 0) throw std::invalid_argument("dims must be positive");
            if (w == Workload::kendall && d < 2) {
                throw std::invalid_argument("kendall needs at least two dimensions");
            }
        }
        if (w == Workload::kendall) {
            for (auto n : cfg.sizes) {
                if (n < 2) throw std::invalid_argument("kendall needs sample size >= 2");
            }
        }
    }
}

std::vector<std::vector<double>> normal_columns(std::size_t d, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    std::vector<std::vector<double>> cols(d, std::vector<double>(n));
    for (auto& col : cols) {
        for (auto& v : col) v = dist(rng);
    }
    return cols;
}

std::vector<BenchRecord> bench_empty(const BenchConfig& cfg) {
    std::vector<BenchRecord> out;
    const auto W = Workload::empty_jobs;
    for (auto n : cfg.sizes) {
        auto t = measure(cfg.reps, [n] {
            for (std::size_t i = 0; i < n; ++i) empty_job();
        });
        out.push_back(record(cfg, W, Scheduler::sequential, n, 0, 1, 0, t));

        for (auto w : cfg.workers) {
            t = measure(cfg.reps, [n, w] {
                ThreadPool pool(w);
                for (std::size_t i = 0; i < n; ++i) pool.push(empty_job);
                pool.join();
            });
            out.push_back(record(cfg, W, Scheduler::pool, n, 0, w, 0, t));

            t = measure(cfg.reps, [n, w, b = cfg.batches] {
                parallel_for(0, static_cast<std::ptrdiff_t>(n), [](std::ptrdiff_t) { empty_job(); },
                             w, b);
            });
            out.push_back(record(cfg, W, Scheduler::parallel_for, n, 0, w, cfg.batches, t));
        }
    }
    return out;
}

std::vector<BenchRecord> bench_thread_spawn(const BenchConfig& cfg) {
    std::vector<BenchRecord> out;
    const auto W = Workload::thread_spawn;
    for (auto k : cfg.sizes) {
        auto t = measure(cfg.reps, [k] {
            std::vector<std::thread> threads;
            threads.reserve(k);
            for (std::size_t i = 0; i < k; ++i) threads.emplace_back(empty_job);
            for (auto& th : threads) th.join();
        });
        out.push_back(record(cfg, W, Scheduler::raw_threads, k, 0, k, 0, t));

        t = measure(cfg.reps, [k] {
            std::vector<GuestThread> threads;
            threads.reserve(k);
            for (std::size_t i = 0; i < k; ++i) threads.emplace_back(empty_job);
            for (auto& th : threads) th.join();
        });
        out.push_back(record(cfg, W, Scheduler::guest_threads, k, 0, k, 0, t));
    }
    return out;
}

std::vector<BenchRecord> bench_interrupt(const BenchConfig& cfg) {
    std::vector<BenchRecord> out;
    const auto W = Workload::interrupt_check;
    for (auto n : cfg.sizes) {
        auto loop = [n] {
            for (std::size_t i = 0; i < n; ++i) check_interrupt();
        };
        auto t = measure(cfg.reps, loop);
        out.push_back(record(cfg, W, Scheduler::host_thread, n, 0, 1, 0, t));

        Timing child;
        std::exception_ptr failure;
        std::thread worker([&] {
            try {
                child = measure(cfg.reps, loop);
            } catch (...) {
                failure = std::current_exception();
            }
        });
        worker.join();
        if (failure) std::rethrow_exception(failure);
        out.push_back(record(cfg, W, Scheduler::child_thread, n, 0, 1, 0, child));
    }
    return out;
}

std::vector<BenchRecord> bench_kde(const BenchConfig& cfg) {
    using kernels::DensityEstimate;
    std::vector<BenchRecord> out;
    const auto W = Workload::kde;
    for (auto d : cfg.dims) {
        for (auto n : cfg.sizes) {
            const auto data = normal_columns(d, n, cfg.seed);
            auto estimate_all = [&data, d] {
                std::vector<DensityEstimate> est(d);
                for (std::size_t j = 0; j < d; ++j) est[j] = kernels::kde_gauss(data[j]);
                return est;
            };
            const auto reference = estimate_all();

            std::vector<BenchRecord> rows;
            rows.push_back(record(cfg, W, Scheduler::sequential, n, d, 1, 0,
                                  measure(cfg.reps, [&] { (void)estimate_all(); })));

            for (auto w : cfg.workers) {
                auto t = measure(cfg.reps, [&] {
                    std::vector<DensityEstimate> est(d);
                    ThreadPool pool(w);
                    for (std::size_t j = 0; j < d; ++j) {
                        pool.push([&, j] { est[j] = kernels::kde_gauss(data[j]); });
                    }
                    pool.join();
                    require_same_output(reference, est, "kde/pool");
                });
                rows.push_back(record(cfg, W, Scheduler::pool, n, d, w, 0, t));

                t = measure(cfg.reps, [&] {
                    std::vector<DensityEstimate> est(d);
                    parallel_for(
                        0, static_cast<std::ptrdiff_t>(d),
                        [&](std::ptrdiff_t j) { est[j] = kernels::kde_gauss(data[j]); }, w,
                        cfg.batches);
                    require_same_output(reference, est, "kde/parallel_for");
                });
                rows.push_back(record(cfg, W, Scheduler::parallel_for, n, d, w, cfg.batches, t));
            }
            out.insert(out.end(), rows.begin(), rows.end());
        }
    }
    return out;
}

std::vector<BenchRecord> bench_kendall(const BenchConfig& cfg) {
    std::vector<BenchRecord> out;
    const auto W = Workload::kendall;
    for (auto d : cfg.dims) {
        for (auto n : cfg.sizes) {
            const auto data = normal_columns(d, n, cfg.seed);
            const auto reference = kernels::kendall_matrix_sequential(data);

            std::vector<BenchRecord> rows;
            rows.push_back(record(
                cfg, W, Scheduler::sequential, n, d, 1, 0,
                measure(cfg.reps, [&] { (void)kernels::kendall_matrix_sequential(data); })));

            for (auto w : cfg.workers) {
                auto t = measure(cfg.reps, [&] {
                    ThreadPool pool(w);
                    auto m = kernels::kendall_matrix(data, pool);
                    pool.join();
                    require_same_output(reference, m, "kendall/pool");
                });
                rows.push_back(record(cfg, W, Scheduler::pool, n, d, w, 0, t));

                t = measure(cfg.reps, [&] {
                    ThreadPool pool(w);
                    auto m = kernels::kendall_matrix_batched(data, pool, cfg.batches);
                    pool.join();
                    require_same_output(reference, m, "kendall/parallel_for");
                });
                rows.push_back(record(cfg, W, Scheduler::parallel_for, n, d, w, cfg.batches, t));
            }
            out.insert(out.end(), rows.begin(), rows.end());
        }
    }
    return out;
}

std::vector<BenchRecord> run(const BenchConfig& cfg) {
    validate(cfg);
    std::vector<BenchRecord> all;
    for (auto w : cfg.workloads) {
        std::vector<BenchRecord> part;
        switch (w) {
        case Workload::empty_jobs: part = bench_empty(cfg); break;
        case Workload::thread_spawn: part = bench_thread_spawn(cfg); break;
        case Workload::interrupt_check: part = bench_interrupt(cfg); break;
        case Workload::kde: part = bench_kde(cfg); break;
        case Workload::kendall: part = bench_kendall(cfg); break;
        }
        all.insert(all.end(), part.begin(), part.end());
    }
    return all;
}

void write_csv(std::ostream& os, std::span<const BenchRecord> records) {
    os << csv_header << '\n';
    for (const auto& r : records) {
        os << to_string(r.workload) << ',' << to_string(r.scheduler) << ',' << r.n << ',' << r.d
           << ',' << r.workers << ',' << r.batches << ',' << r.reps << ',' << r.nanos_median
           << ',' << r.nanos_min << ',' << r.seed << '\n';
    }
}

} // namespace tether::bench
