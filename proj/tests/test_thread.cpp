#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/resource.h>

#include <atomic>
#include <chrono>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "support.hpp"
#include "tether/thread.hpp"

using namespace tether;
using namespace std::chrono_literals;
using tether::testing::HostFixture;
using tether::testing::split_lines;
using Clock = std::chrono::steady_clock;

namespace {

struct Sentinel : std::runtime_error {
    Sentinel() : std::runtime_error("sentinel") {}
};

double thread_cpu_seconds() {
    rusage usage{};
    getrusage(RUSAGE_THREAD, &usage);
    return static_cast<double>(usage.ru_utime.tv_sec + usage.ru_stime.tv_sec) +
           1e-6 * static_cast<double>(usage.ru_utime.tv_usec + usage.ru_stime.tv_usec);
}

} // namespace

TEST_CASE_FIXTURE(HostFixture, "guest body receives its arguments") {
    GuestThread t([](int id) { print(std::to_string(id) + " says hi\n"); }, 1);
    t.join();
    CHECK(output.text() == "1 says hi\n");
}

TEST_CASE_FIXTURE(HostFixture, "no-op body joins promptly without output") {
    const auto start = Clock::now();
    GuestThread t([] {});
    t.join();
    CHECK(Clock::now() - start < 100ms);
    CHECK(output.count() == 0);
}

TEST_CASE_FIXTURE(HostFixture, "a raising body surfaces as TaskFailed at join") {
    GuestThread t([] { throw Sentinel(); });
    try {
        t.join();
        FAIL("expected TaskFailed");
    } catch (const TaskFailed& e) {
        CHECK_THROWS_AS(e.rethrow_original(), Sentinel);
    }
    CHECK_FALSE(t.joinable());
}

TEST_CASE_FIXTURE(HostFixture, "scaled pyjama party: interruption stops the second round") {
    auto job = [](int id) {
        std::this_thread::sleep_for(200ms);
        print(std::to_string(id) + " slept for one round\n");
        check_interrupt();
        std::this_thread::sleep_for(200ms);
        print(std::to_string(id) + " slept for another round\n");
    };
    GuestThread t1(job, 1);
    GuestThread t2(job, 2);
    t1.set_pump_interval(50ms);
    t2.set_pump_interval(50ms);

    std::this_thread::sleep_for(100ms);
    trigger.fire();
    CHECK_THROWS_AS(t1.join(), Interrupted);
    CHECK_THROWS_AS(t2.join(), Interrupted);

    const auto text = output.text();
    CHECK(text.find("1 slept for one round") != std::string::npos);
    CHECK(text.find("2 slept for one round") != std::string::npos);
    CHECK(text.find("another") == std::string::npos);
}

TEST_CASE_FIXTURE(HostFixture, "join releases child messages without any host print") {
    GuestThread t([] {
        for (int i = 0; i < 5; ++i) print("tick\n");
    });
    t.join();
    CHECK(split_lines(output.text()).size() == 5);
}

TEST_CASE_FIXTURE(HostFixture, "join returns within two pump intervals of the worker's next check") {
    std::atomic<bool> noticed{false};
    Clock::time_point noticed_at;
    GuestThread t([&] {
        while (!is_interrupted()) std::this_thread::sleep_for(1ms);
        noticed_at = Clock::now();
        noticed = true;
    });
    t.set_pump_interval(100ms);
    std::thread firer([&] {
        std::this_thread::sleep_for(150ms);
        trigger.fire();
    });
    CHECK_THROWS_AS(t.join(), Interrupted);
    const auto returned = Clock::now();
    firer.join();
    REQUIRE(noticed);
    CHECK(returned - noticed_at < 200ms);
}

TEST_CASE_FIXTURE(HostFixture, "joinable, detach and swap follow std::thread semantics") {
    GuestThread a([] {});
    CHECK(a.joinable());
    a.join();
    CHECK_FALSE(a.joinable());
    CHECK_THROWS_AS(a.join(), NotJoinable);

    GuestThread d([] {});
    d.detach();
    CHECK_FALSE(d.joinable());
    CHECK_THROWS_AS(d.detach(), NotJoinable);

    std::atomic<int> which{0};
    GuestThread x([&] { which = 1; });
    GuestThread y([&] {
        std::this_thread::sleep_for(50ms);
        which = 2;
    });
    const auto y_id = y.get_id();
    swap(x, y);
    CHECK(x.get_id() == y_id);
    x.join();
    CHECK(which == 2);
    y.join();
}

TEST_CASE_FIXTURE(HostFixture, "join from a non-host thread blocks without pumping") {
    GuestThread t([] { print("from guest\n"); });
    std::thread other([&] { t.join(); });
    other.join();
    CHECK(output.count() == 0);
    flush();
    CHECK(output.text() == "from guest\n");
}

TEST_CASE_FIXTURE(HostFixture, "child messages surface within two pump intervals during a long join") {
    constexpr auto pump = 100ms;
    std::mutex m;
    std::vector<Clock::time_point> sent;
    std::vector<Clock::time_point> seen;
    init_host(trigger.source(), [&](std::string_view) {
        std::lock_guard lock(m);
        seen.push_back(Clock::now());
    });

    GuestThread t([&] {
        for (int i = 0; i < 5; ++i) {
            std::this_thread::sleep_for(130ms);
            {
                std::lock_guard lock(m);
                sent.push_back(Clock::now());
            }
            print("x");
        }
    });
    t.set_pump_interval(pump);
    t.join();
    REQUIRE(sent.size() == 5);
    REQUIRE(seen.size() == 5);
    for (std::size_t i = 0; i < sent.size(); ++i) CHECK(seen[i] - sent[i] <= 2 * pump);
}

TEST_CASE_FIXTURE(HostFixture, "idle join does not spin") {
    GuestThread t([] { std::this_thread::sleep_for(1s); });
    const double before = thread_cpu_seconds();
    t.join();
    CHECK(thread_cpu_seconds() - before < 0.05);
}

TEST_CASE_FIXTURE(HostFixture, "destructor joins an unjoined guest") {
    std::atomic<bool> ran{false};
    {
        GuestThread t([&] {
            std::this_thread::sleep_for(20ms);
            ran = true;
        });
    }
    CHECK(ran);
}
