#pragma once

#include <algorithm>
#include <chrono>
#include <condition_variable>
#include <exception>
#include <functional>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "auditsim/common.hpp"

namespace auditsim {

/// Abstract time source agents run against. now() is monotone non-decreasing;
/// sleep_until() with a past deadline returns immediately.
class Clock {
public:
    virtual ~Clock() = default;
    virtual TimeMs now() = 0;
    virtual void sleep_until(TimeMs t) = 0;

    void sleep_for(TimeMs d) { sleep_until(now() + d); }
};

/// Single-owner simulated clock for unit tests: sleeping jumps time forward,
/// nothing ever waits.
class ManualClock final : public Clock {
public:
    explicit ManualClock(TimeMs start = 0) : now_(start) {}

    TimeMs now() override { return now_; }

    void sleep_until(TimeMs t) override
    {
        if (t > now_)
            now_ = t;
    }

    void advance(TimeMs d) { now_ += d; }

private:
    TimeMs now_;
};

/// Real time. Timestamps are comparable with design epochs (both are Unix
/// epoch milliseconds).
class WallClock final : public Clock {
public:
    TimeMs now() override
    {
        using namespace std::chrono;
        return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
    }

    void sleep_until(TimeMs t) override
    {
        for (;;) {
            TimeMs current = now();
            if (current >= t)
                return;
            std::this_thread::sleep_for(
                std::chrono::milliseconds(std::min<TimeMs>(t - current, 250)));
        }
    }
};

// ---------------------------------------------------------------------------
// VirtualScheduler
//
// Runs many sequential actors over one shared virtual timeline. Exactly one
// participant holds the floor at any moment; a participant yields by
// sleeping, and the scheduler hands the floor to the parked participant with
// the smallest (wake time, registration order). That makes every interaction
// with shared state (throttle counters, ingest capacity) happen in a fixed,
// reproducible order, no matter how the OS schedules the underlying threads.
// ---------------------------------------------------------------------------

class VirtualScheduler {
public:
    explicit VirtualScheduler(TimeMs epoch) : now_(epoch) {}

    VirtualScheduler(const VirtualScheduler&) = delete;
    VirtualScheduler& operator=(const VirtualScheduler&) = delete;

    /// Registers a participant. Must be called before run(). The body gets a
    /// Clock bound to this scheduler and starts at `first_wake`.
    void spawn(std::string name, TimeMs first_wake, std::function<void(Clock&)> body)
    {
        auto p = std::make_unique<Participant>();
        p->name = std::move(name);
        p->order = participants_.size();
        p->wake_at = std::max(first_wake, now_);
        p->parked = true;
        p->body = std::move(body);
        participants_.push_back(std::move(p));
    }

    /// Runs every participant to completion. Rethrows the first exception a
    /// participant body raised, after all threads have stopped.
    void run()
    {
        {
            std::lock_guard<std::mutex> lk(mu_);
            live_ = participants_.size();
            running_ = true;
        }
        std::vector<std::thread> threads;
        threads.reserve(participants_.size());
        for (auto& p : participants_)
            threads.emplace_back([this, part = p.get()] { participant_main(part); });
        {
            std::lock_guard<std::mutex> lk(mu_);
            grant_next_locked();
        }
        for (auto& t : threads)
            t.join();
        for (auto& p : participants_)
            if (p->failure)
                std::rethrow_exception(p->failure);
    }

    TimeMs now()
    {
        std::lock_guard<std::mutex> lk(mu_);
        return now_;
    }

private:
    struct Participant {
        std::string name;
        std::size_t order = 0;
        TimeMs wake_at = 0;
        bool parked = false;  // queued for a future grant
        bool granted = false; // currently holds the floor
        std::condition_variable cv;
        std::function<void(Clock&)> body;
        std::exception_ptr failure;
    };

    class BoundClock final : public Clock {
    public:
        BoundClock(VirtualScheduler& sched, Participant& p) : sched_(sched), p_(p) {}
        TimeMs now() override { return sched_.now(); }
        void sleep_until(TimeMs t) override { sched_.sleep_participant(p_, t); }

    private:
        VirtualScheduler& sched_;
        Participant& p_;
    };

    void participant_main(Participant* p)
    {
        {
            std::unique_lock<std::mutex> lk(mu_);
            p->cv.wait(lk, [&] { return p->granted; });
        }
        BoundClock clock(*this, *p);
        try {
            p->body(clock);
        } catch (...) {
            p->failure = std::current_exception();
        }
        std::lock_guard<std::mutex> lk(mu_);
        p->granted = false;
        --live_;
        grant_next_locked();
    }

    void sleep_participant(Participant& p, TimeMs t)
    {
        std::unique_lock<std::mutex> lk(mu_);
        p.wake_at = std::max(t, now_);
        p.granted = false;
        p.parked = true;
        grant_next_locked();
        p.cv.wait(lk, [&] { return p.granted; });
    }

    // Hands the floor to the earliest parked participant. Caller holds mu_.
    void grant_next_locked()
    {
        if (!running_)
            return;
        Participant* next = nullptr;
        for (auto& cand : participants_) {
            if (!cand->parked)
                continue;
            if (!next || cand->wake_at < next->wake_at ||
                (cand->wake_at == next->wake_at && cand->order < next->order))
                next = cand.get();
        }
        if (!next)
            return;
        next->parked = false;
        next->granted = true;
        if (next->wake_at > now_)
            now_ = next->wake_at;
        next->cv.notify_one();
    }

    std::mutex mu_;
    TimeMs now_;
    bool running_ = false;
    std::size_t live_ = 0;
    std::vector<std::unique_ptr<Participant>> participants_;
};

} // namespace auditsim
