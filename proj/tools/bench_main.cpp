// bench: runs the library's benchmark workloads and writes CSV.
//
//   bench <workload> [--sizes a,b,c] [--dims a,b] [--workers k[,k2...]]
//         [--batches m] [--reps r] [--seed s] [--out file.csv]
//
// The default worker grid is the hardware core count, overridable through
// TETHER_WORKERS. Exit codes: 0 success, 1 output mismatch, 2 invalid
// configuration, 130 interrupted.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tether/bench.hpp"
#include "tether/host_sync.hpp"
#include "tether/pool.hpp"

namespace {

std::size_t default_workers() {
    if (const char* env = std::getenv("TETHER_WORKERS")) {
        try {
            const long v = std::stol(env);
            if (v > 0) return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
        }
        std::cerr << "ignoring invalid TETHER_WORKERS=" << env << '\n';
    }
    return tether::hardware_workers();
}

} // namespace

int main(int argc, char** argv) {
    using namespace tether;

    CLI::App app{"Benchmarks for host-synchronized threads, pools and parallel loops"};
    std::string workload_name;
    bench::BenchConfig config;

    app.add_option("workload", workload_name,
                   "empty_jobs | thread_spawn | interrupt_check | kde | kendall")
        ->required();
    app.add_option("--sizes", config.sizes, "job counts or sample sizes")->delimiter(',');
    app.add_option("--dims", config.dims, "number of variables (kde, kendall)")->delimiter(',');
    app.add_option("--workers", config.workers, "worker counts")->delimiter(',');
    app.add_option("--batches", config.batches, "batches for parallel_for (0 = auto)");
    app.add_option("--reps", config.reps, "timed repetitions (>= 3)");
    app.add_option("--seed", config.seed, "seed for the data generator");
    app.add_option("--out", config.out_path, "CSV output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const auto workload = bench::parse_workload(workload_name);
    if (!workload) {
        std::cerr << "unknown workload: " << workload_name << '\n';
        return 2;
    }
    config.workloads = {*workload};
    if (config.sizes.empty()) config.sizes = bench::default_sizes(*workload);
    if (config.dims.empty()) config.dims = bench::default_dims(*workload);
    if (config.workers.empty()) config.workers = {default_workers()};

    try {
        bench::validate(config);
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid configuration: " << e.what() << '\n';
        return 2;
    }

    init_host(install_signal_source(), stdout_sink());
    std::cerr << "# rng=" << bench::rng_name << " seed=" << config.seed << '\n';

    std::vector<bench::BenchRecord> records;
    try {
        records = bench::run(config);
    } catch (const OutputMismatch& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const Interrupted& e) {
        std::cerr << e.what() << '\n';
        return 130;
    }

    if (config.out_path.empty()) {
        bench::write_csv(std::cout, records);
    } else {
        std::ofstream out(config.out_path);
        if (!out) {
            std::cerr << "cannot open " << config.out_path << '\n';
            return 2;
        }
        bench::write_csv(out, records);
    }
    return 0;
}
