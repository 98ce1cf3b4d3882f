#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <atomic>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <vector>

#include "support.hpp"
#include "tether/parallel.hpp"

using namespace tether;
using tether::testing::HostFixture;

TEST_CASE("auto batch count follows eight batches per worker, clamped to the range") {
    CHECK(auto_batch_count(100, 4) == 32);
    CHECK(auto_batch_count(3, 4) == 3);
    CHECK(auto_batch_count(0, 4) == 1);
    CHECK(auto_batch_count(1000, 0) == 8);
    CHECK(auto_batch_count(0, 0) == 1);
}

TEST_CASE("batch plans partition the range into balanced contiguous batches") {
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::ptrdiff_t> start(-500, 500);
    std::uniform_int_distribution<std::ptrdiff_t> length(0, 400);
    std::uniform_int_distribution<std::size_t> batches(0, 500);
    for (int s = 0; s < 10'000; ++s) {
        const auto b = start(rng);
        const auto e = b + length(rng);
        const auto k = batches(rng);
        const auto plan = make_batch_plan(b, e, k);
        const auto n = static_cast<std::size_t>(e - b);

        REQUIRE(plan.n_batches() >= 1);
        REQUIRE(plan.n_batches() <= std::max<std::size_t>(1, n));
        REQUIRE(plan.boundaries.front() == b);
        REQUIRE(plan.boundaries.back() == e);

        std::ptrdiff_t smallest = e - b, largest = 0;
        std::ptrdiff_t covered = b;
        for (std::size_t i = 0; i < plan.n_batches(); ++i) {
            REQUIRE(plan.batch_begin(i) == covered);
            const auto size = plan.batch_end(i) - plan.batch_begin(i);
            if (n > 0) REQUIRE(size > 0);
            smallest = std::min(smallest, size);
            largest = std::max(largest, size);
            covered = plan.batch_end(i);
        }
        REQUIRE(covered == e);
        REQUIRE(largest - smallest <= 1);

        // Pure function of its inputs.
        REQUIRE(make_batch_plan(b, e, k).boundaries == plan.boundaries);
    }
}

TEST_CASE("batch plan rejects reversed bounds") {
    CHECK_THROWS_AS(make_batch_plan(5, 4, 1), std::invalid_argument);
}

TEST_CASE_FIXTURE(HostFixture, "parallel_for fills x[i] = i") {
    std::vector<int> x(100);
    parallel_for(0, 100, [&x](std::ptrdiff_t i) { x[i] = static_cast<int>(i); });
    for (int i = 0; i < 100; ++i) CHECK(x[i] == i);
}

TEST_CASE_FIXTURE(HostFixture, "parallel_for over an empty range never calls the body") {
    std::atomic<int> calls{0};
    parallel_for(5, 5, [&](std::ptrdiff_t) { ++calls; });
    CHECK(calls == 0);
}

TEST_CASE_FIXTURE(HostFixture, "two workers in twenty batches match the sequential loop") {
    std::vector<int> par(1000, 0), seq(1000, 0);
    parallel_for(0, 1000, [&](std::ptrdiff_t i) { par[i] += 1; }, 2, 20);
    for (int i = 0; i < 1000; ++i) seq[i] += 1;
    CHECK(par == seq);
}

TEST_CASE_FIXTURE(HostFixture, "negative bounds are supported") {
    std::vector<std::ptrdiff_t> seen(20, 0);
    parallel_for(-10, 10, [&](std::ptrdiff_t i) { seen[i + 10] = i; }, 3, 7);
    for (std::ptrdiff_t i = -10; i < 10; ++i) CHECK(seen[i + 10] == i);
}

TEST_CASE_FIXTURE(HostFixture, "parallel_for_each doubles in place") {
    std::vector<double> x(100, 1.0);
    parallel_for_each(x, [](double& v) { v *= 2; });
    for (double v : x) CHECK(v == 2.0);

    parallel_for_each(x, [](double& v) { v *= 2; }, 2, 20);
    for (double v : x) CHECK(v == 4.0);

    std::vector<double> empty;
    std::atomic<int> calls{0};
    parallel_for_each(empty, [&](double&) { ++calls; });
    CHECK(calls == 0);
}

TEST_CASE_FIXTURE(HostFixture, "parallel_for_each with index-dependent values matches a sequential for-each") {
    std::vector<std::int64_t> par(257), seq(257);
    for (std::size_t i = 0; i < par.size(); ++i) par[i] = seq[i] = static_cast<std::int64_t>(i);
    auto f = [](std::int64_t& v) { v = v * v - 3 * v + 7; };
    parallel_for_each(par, f, 3);
    for (auto& v : seq) f(v);
    CHECK(par == seq);
}

TEST_CASE_FIXTURE(HostFixture, "parallel_for equals the sequential loop for every worker/batch combination") {
    auto f = [](std::ptrdiff_t i) { return static_cast<std::int64_t>(i * 31 + (i % 7) * (i % 5)); };
    const std::ptrdiff_t n = 500;
    std::vector<std::int64_t> expected(n);
    for (std::ptrdiff_t i = 0; i < n; ++i) expected[i] = f(i);

    for (std::size_t workers : {0u, 1u, 2u, 8u}) {
        for (std::size_t batches : {std::size_t{1}, std::size_t{0}, static_cast<std::size_t>(n)}) {
            std::vector<std::int64_t> out(n, -1);
            parallel_for(0, n, [&](std::ptrdiff_t i) { out[i] = f(i); }, workers, batches);
            CHECK(out == expected);
        }
    }
}

TEST_CASE_FIXTURE(HostFixture, "parallel_for propagates body errors as TaskFailed") {
    CHECK_THROWS_AS(parallel_for(0, 10,
                                 [](std::ptrdiff_t i) {
                                     if (i == 3) throw std::runtime_error("boom");
                                 },
                                 2),
                    TaskFailed);
}
