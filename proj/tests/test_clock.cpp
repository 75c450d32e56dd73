#include <catch2/catch_amalgamated.hpp>

#include <string>
#include <vector>

#include "auditsim/agent.hpp"
#include "auditsim/clock.hpp"

using namespace auditsim;

// A minute-aligned epoch standing in for 12:00:00.
static constexpr TimeMs kNoon = 1'700'000'040'000;
static_assert(kNoon % kMillisPerMinute == 0);

TEST_CASE("next minute boundary is strict")
{
    REQUIRE(next_minute_after(kNoon + seconds(3 * 60 + 27)) == kNoon + seconds(4 * 60));
    // landing exactly on a boundary waits for the following one
    REQUIRE(next_minute_after(kNoon + seconds(4 * 60)) == kNoon + seconds(5 * 60));
    REQUIRE(next_minute_after(kNoon + seconds(4 * 60) + 1) == kNoon + seconds(5 * 60));
}

TEST_CASE("trigger times: first on the minute, then one cycle apart")
{
    // landed 12:03:27, no previous trigger -> 12:04:00
    REQUIRE(next_trigger_time(kNoon + seconds(207), std::nullopt, seconds(420)) ==
            kNoon + seconds(240));
    // previous trigger 12:04:00, 420 s cycle -> 12:11:00
    REQUIRE(next_trigger_time(kNoon + seconds(600), kNoon + seconds(240), seconds(420)) ==
            kNoon + seconds(660));
    // landing exactly at 12:04:00.000 waits for 12:05:00
    REQUIRE(next_trigger_time(kNoon + seconds(240), std::nullopt, seconds(420)) ==
            kNoon + seconds(300));
}

TEST_CASE("manual clock advances by sleeping, never backwards")
{
    ManualClock clock(kNoon);
    REQUIRE(clock.now() == kNoon);
    clock.sleep_until(kNoon + 500);
    REQUIRE(clock.now() == kNoon + 500);
    clock.sleep_until(kNoon); // past deadline: no-op
    REQUIRE(clock.now() == kNoon + 500);
    clock.advance(100);
    REQUIRE(clock.now() == kNoon + 600);
}

TEST_CASE("virtual scheduler interleaves participants by (time, order)")
{
    VirtualScheduler sched(kNoon);
    std::vector<std::string> trace;

    sched.spawn("a", kNoon, [&](Clock& clock) {
        trace.push_back("a0@" + std::to_string(clock.now() - kNoon));
        clock.sleep_until(kNoon + 100);
        trace.push_back("a1@" + std::to_string(clock.now() - kNoon));
        clock.sleep_until(kNoon + 300);
        trace.push_back("a2@" + std::to_string(clock.now() - kNoon));
    });
    sched.spawn("b", kNoon, [&](Clock& clock) {
        trace.push_back("b0@" + std::to_string(clock.now() - kNoon));
        clock.sleep_until(kNoon + 100);
        trace.push_back("b1@" + std::to_string(clock.now() - kNoon));
        clock.sleep_until(kNoon + 200);
        trace.push_back("b2@" + std::to_string(clock.now() - kNoon));
    });
    sched.run();

    // Equal wake times break ties by spawn order; b's 200 precedes a's 300.
    REQUIRE(trace == std::vector<std::string>{"a0@0", "b0@0", "a1@100", "b1@100", "b2@200",
                                              "a2@300"});
    REQUIRE(sched.now() == kNoon + 300);
}

TEST_CASE("virtual scheduler is deterministic across runs")
{
    auto run_once = [] {
        VirtualScheduler sched(0);
        std::vector<int> order;
        for (int i = 0; i < 8; ++i) {
            sched.spawn("p" + std::to_string(i), i % 3, [&, i](Clock& clock) {
                order.push_back(i);
                clock.sleep_until(clock.now() + (i * 7) % 5);
                order.push_back(10 + i);
            });
        }
        sched.run();
        return order;
    };
    REQUIRE(run_once() == run_once());
}

TEST_CASE("virtual scheduler propagates participant failures")
{
    VirtualScheduler sched(0);
    sched.spawn("boom", 0, [](Clock&) { throw std::runtime_error("component crash"); });
    sched.spawn("fine", 0, [](Clock& clock) { clock.sleep_until(10); });
    REQUIRE_THROWS_WITH(sched.run(), "component crash");
}
