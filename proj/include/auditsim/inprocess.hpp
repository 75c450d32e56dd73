#pragma once

#include <cmath>

#include "auditsim/clients.hpp"
#include "auditsim/clock.hpp"
#include "auditsim/collector.hpp"
#include "auditsim/engine_fleet.hpp"

namespace auditsim {

/// Direct calls into the mock fleet. Latency becomes clock advancement: in
/// simulated mode time jumps, in wall mode the bound clock really sleeps.
/// An attempt that would finish past the deadline is truncated at the
/// deadline and reported as a Deadline failure.
class InProcessEngineClient final : public EngineClient {
public:
    InProcessEngineClient(MockEngineFleet& fleet, Clock& clock) : fleet_(fleet), clock_(clock) {}

    FetchResult fetch(const EngineRequest& request, TimeMs deadline) override
    {
        const TimeMs start = clock_.now();
        if (start >= deadline)
            return FetchFailure{FetchErrorReason::Deadline};

        MockEngineFleet::Attempt attempt = fleet_.serve(request);
        const TimeMs done = start + static_cast<TimeMs>(std::llround(attempt.cost_ms));
        if (done > deadline) {
            clock_.sleep_until(deadline);
            return FetchFailure{FetchErrorReason::Deadline};
        }
        clock_.sleep_until(done);
        switch (attempt.status) {
        case MockEngineFleet::Attempt::Status::Ok:
            return std::move(attempt.page);
        case MockEngineFleet::Attempt::Status::Stall:
            return FetchFailure{FetchErrorReason::Timeout};
        case MockEngineFleet::Attempt::Status::TransportError:
        default:
            return FetchFailure{FetchErrorReason::Transport};
        }
    }

private:
    MockEngineFleet& fleet_;
    Clock& clock_;
};

/// Direct calls into the collector service.
class InProcessTrackerClient final : public TrackerClient {
public:
    explicit InProcessTrackerClient(CollectorService& collector) : collector_(collector) {}

    RegisterResult register_agent(const std::string& token) override
    {
        return collector_.register_agent(token);
    }

    std::optional<ConfigLists> get_lists() override { return collector_.get_lists(); }

    TrackAck track(const PageUpload& upload) override { return collector_.ingest(upload); }

private:
    CollectorService& collector_;
};

} // namespace auditsim
