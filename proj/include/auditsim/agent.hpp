#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "auditsim/clients.hpp"
#include "auditsim/clock.hpp"
#include "auditsim/common.hpp"
#include "auditsim/design.hpp"
#include "auditsim/pages.hpp"
#include "auditsim/payload.hpp"
#include "auditsim/plan.hpp"
#include "auditsim/rotation.hpp"
#include "auditsim/session.hpp"

namespace auditsim {

struct AgentConfig {
    std::string agent_id;
    std::string region;
    BrowserProfile browser;
    int start_offset = 0;
    std::string token;
    std::string collector_url; // informational for in-process clients
    std::string dummy_url = "http://localhost:8000/";
};

/// First routine: the minute boundary strictly after landing. Later
/// routines: exactly one cycle after the previous trigger, independent of
/// how long the routine actually took.
inline TimeMs next_trigger_time(TimeMs landed_at, std::optional<TimeMs> previous_trigger,
                                TimeMs cycle_ms)
{
    if (previous_trigger)
        return *previous_trigger + cycle_ms;
    return next_minute_after(landed_at);
}

/// Up to `max_reloads` attempts for one page/section. Stops early on the
/// first success or when the deadline cuts an attempt short; never issues
/// more than `max_reloads` requests.
inline FetchResult fetch_with_retries(EngineClient& client, const EngineRequest& request,
                                      int max_reloads, TimeMs deadline)
{
    FetchResult last = FetchFailure{FetchErrorReason::Transport};
    for (int attempt = 0; attempt < max_reloads; ++attempt) {
        last = client.fetch(request, deadline);
        if (fetch_ok(last))
            return last;
        if (std::get<FetchFailure>(last).reason == FetchErrorReason::Deadline)
            return last;
    }
    return last;
}

struct CategoryOutcome {
    enum class Status { Complete, Truncated, Skipped };
    Status status = Status::Complete;
    std::string reason;          // "network", "deadline", "captcha"
    int snapshots_uploaded = 0;  // result pages uploaded for this category
};

inline constexpr std::string_view to_string(CategoryOutcome::Status s)
{
    switch (s) {
    case CategoryOutcome::Status::Complete: return "complete";
    case CategoryOutcome::Status::Truncated: return "truncated";
    case CategoryOutcome::Status::Skipped: return "skipped";
    }
    return "complete";
}

struct RoutineResult {
    std::string engine_id;
    std::string query;
    int schedule_index = 0;
    int iteration = 0;
    std::map<SearchCategory, CategoryOutcome> per_category;
    TimeMs started_at = 0;
    TimeMs ended_at = 0;
    bool aborted_by_readiness = false;

    bool all_complete() const
    {
        for (const auto& [cat, out] : per_category) {
            (void)cat;
            if (out.status != CategoryOutcome::Status::Complete)
                return false;
        }
        return true;
    }
};

struct RoutineLimits {
    int max_reloads = 5;
    TimeMs hard_deadline = 0; // trigger + readiness_check_seconds
};

struct AgentEvent {
    TimeMs at = 0;
    std::string what;
    std::string detail;
};

struct AgentLog {
    std::string agent_id;
    bool aborted = false;
    std::string abort_reason;
    std::vector<RoutineResult> routines;
    std::vector<AgentEvent> events;
    std::int64_t uploads_accepted = 0;
    std::int64_t uploads_shed = 0;
    std::int64_t uploads_rejected = 0;

    const AgentEvent* find_event(std::string_view what, std::size_t nth = 0) const
    {
        std::size_t seen = 0;
        for (const auto& e : events)
            if (e.what == what && seen++ == nth)
                return &e;
        return nullptr;
    }
};

// ---------------------------------------------------------------------------
// AgentRunner
//
// One virtual agent: registers with the collector, downloads the engine and
// query lists, then loops over its rotation schedule triggering one search
// routine per cycle. Every page it visits — result, home, consent, captcha,
// dummy — is uploaded to the collector exactly once.
// ---------------------------------------------------------------------------

class AgentRunner {
public:
    AgentRunner(AgentConfig config, const ExperimentDesign& design, Clock& clock,
                EngineClient& engines, TrackerClient& tracker)
        : config_(std::move(config)), design_(design), clock_(clock), engines_(engines),
          tracker_(tracker)
    {
        log_.agent_id = config_.agent_id;
    }

    /// Full agent lifecycle; returns the run log.
    AgentLog run()
    {
        clock_.sleep_until(design_.start_epoch);
        auto reg = tracker_.register_agent(config_.token);
        if (!reg.ok()) {
            abort_run("registration failed: " + reg.error);
            return std::move(log_);
        }
        event("registered");

        auto lists = tracker_.get_lists();
        if (!lists) {
            abort_run("list download failed");
            return std::move(log_);
        }
        event("lists_downloaded");

        std::vector<const EngineProfile*> order;
        order.reserve(lists->engine_ids.size());
        for (const auto& id : lists->engine_ids) {
            const EngineProfile* p = design_.find_engine(id);
            if (!p) {
                abort_run("server engine list names unknown engine '" + id + "'");
                return std::move(log_);
            }
            order.push_back(p);
        }
        if (order.empty() || lists->queries.empty()) {
            abort_run("server lists are empty");
            return std::move(log_);
        }
        queries_ = lists->queries;

        clean("setup");

        const int engine_count = static_cast<int>(order.size());
        const int query_count = static_cast<int>(queries_.size());
        RotationSchedule schedule = rotation_schedule(engine_count, query_count,
                                                      design_.iterations,
                                                      config_.start_offset % engine_count);

        land_on_engine(*order[static_cast<std::size_t>(schedule.pairs[0].engine_index)],
                       clock_.now() + design_.readiness_ms());

        std::optional<TimeMs> previous_trigger;
        for (std::size_t k = 0; k < schedule.size(); ++k) {
            const TimeMs trigger =
                next_trigger_time(clock_.now(), previous_trigger, design_.cycle_ms());
            if (trigger >= design_.end_epoch)
                break;
            previous_trigger = trigger;
            clock_.sleep_until(trigger);
            iteration_ = schedule.iteration_of(k, query_count);
            event("trigger", std::to_string(k));

            const auto& pair = schedule.pairs[k];
            const EngineProfile& profile = *order[static_cast<std::size_t>(pair.engine_index)];
            const std::string& query = queries_[static_cast<std::size_t>(pair.query_index)];
            RoutineLimits limits{design_.max_reloads, trigger + design_.readiness_ms()};

            RoutineResult result = execute_routine(profile, query, routine_plan(profile), limits,
                                                   static_cast<int>(k));
            log_.routines.push_back(result);

            if (k + 1 < schedule.size()) {
                const EngineProfile& next_profile =
                    *order[static_cast<std::size_t>(schedule.pairs[k + 1].engine_index)];
                land_on_engine(next_profile, limits.hard_deadline);
            }
        }
        event("finished");
        return std::move(log_);
    }

    /// One search routine (Steps 6-12): walk each category of the plan,
    /// upload every visited page, then stop on the dummy page and clean.
    /// The hard deadline is the readiness check: whatever is in flight when
    /// it passes is abandoned and the remaining categories are truncated.
    RoutineResult execute_routine(const EngineProfile& profile, const std::string& query,
                                  const RoutinePlan& plan, const RoutineLimits& limits,
                                  int schedule_index)
    {
        RoutineResult result;
        result.engine_id = profile.engine_id;
        result.query = query;
        result.schedule_index = schedule_index;
        result.iteration = iteration_;
        result.started_at = clock_.now();

        bool captcha_seen = false;
        bool deadline_hit = false;
        for (const auto& [category, mode] : plan) {
            CategoryOutcome outcome;
            if (deadline_hit) {
                outcome.status = CategoryOutcome::Status::Truncated;
                outcome.reason = "deadline";
                result.per_category[category] = outcome;
                continue;
            }
            if (captcha_seen && blocked_by_captcha(profile, category)) {
                outcome.status = CategoryOutcome::Status::Skipped;
                outcome.reason = "captcha";
                result.per_category[category] = outcome;
                continue;
            }
            walk_category(profile, query, category, mode, limits, outcome, captcha_seen,
                          deadline_hit);
            result.per_category[category] = outcome;
        }

        // Step 12: park on the dummy page and clean the browser. On a
        // readiness abort this doubles as the reset, at exactly the moment
        // the check fires.
        visit_dummy();
        clean("routine");
        result.aborted_by_readiness = deadline_hit;
        if (deadline_hit)
            event("readiness_reset", profile.engine_id);
        result.ended_at = clock_.now();
        return result;
    }

    const AgentLog& log() const { return log_; }
    const SessionState& session() const { return session_; }
    const AgentConfig& config() const { return config_; }

private:
    static bool blocked_by_captcha(const EngineProfile& profile, SearchCategory category)
    {
        return profile.captcha_policy &&
               profile.captcha_policy->blocked_categories.count(category) != 0;
    }

    void walk_category(const EngineProfile& profile, const std::string& query,
                       SearchCategory category, const NavigationMode& mode,
                       const RoutineLimits& limits, CategoryOutcome& outcome,
                       bool& captcha_seen, bool& deadline_hit)
    {
        for (int index = 1; index <= mode.count; ++index) {
            if (clock_.now() >= limits.hard_deadline) {
                deadline_hit = true;
                outcome.status = CategoryOutcome::Status::Truncated;
                outcome.reason = "deadline";
                return;
            }
            EngineRequest request;
            request.engine_id = profile.engine_id;
            request.kind = RequestKind::Search;
            request.category = category;
            request.query = query;
            request.page_index = index;
            request.source = source();

            FetchResult fetched =
                fetch_with_retries(engines_, request, limits.max_reloads, limits.hard_deadline);
            if (!fetch_ok(fetched)) {
                const auto reason = std::get<FetchFailure>(fetched).reason;
                if (reason == FetchErrorReason::Deadline) {
                    deadline_hit = true;
                    outcome.status = CategoryOutcome::Status::Truncated;
                    outcome.reason = "deadline";
                } else {
                    outcome.status = CategoryOutcome::Status::Truncated;
                    outcome.reason = "network";
                }
                return;
            }

            const EnginePage& page = std::get<EnginePage>(fetched);
            visit_engine_page(profile, page, category, query, index);
            if (page.kind == PageKind::Captcha) {
                captcha_seen = true;
                outcome.status = CategoryOutcome::Status::Skipped;
                outcome.reason = "captcha";
                return;
            }
            ++outcome.snapshots_uploaded;
            if (!page.has_more)
                break; // engine ran out of results before the plan did
        }
        outcome.status = CategoryOutcome::Status::Complete;
    }

    void land_on_engine(const EngineProfile& profile, TimeMs deadline)
    {
        EngineRequest request;
        request.engine_id = profile.engine_id;
        request.kind = RequestKind::Home;
        request.source = source();
        FetchResult fetched =
            fetch_with_retries(engines_, request, design_.max_reloads, deadline);
        if (!fetch_ok(fetched)) {
            event("landing_failed", profile.engine_id);
            return;
        }
        session_.current_url = profile.base_url;
        visit_engine_page(profile, std::get<EnginePage>(fetched), std::nullopt, "", 0);
        event("landed", profile.engine_id);

        if (profile.consent_banner && !session_.consent_accepted) {
            EngineRequest consent = request;
            consent.kind = RequestKind::Consent;
            FetchResult banner =
                fetch_with_retries(engines_, consent, design_.max_reloads, deadline);
            if (fetch_ok(banner)) {
                visit_engine_page(profile, std::get<EnginePage>(banner), std::nullopt, "", 0);
                session_.consent_accepted = true;
                event("consent_accepted", profile.engine_id);
            }
        }
    }

    void visit_engine_page(const EngineProfile& profile, const EnginePage& page,
                           std::optional<SearchCategory> category, const std::string& query,
                           int page_index)
    {
        session_.deposit("history", profile.base_url + "#" + std::to_string(page_index));
        session_.deposit("cookies", profile.engine_id);
        session_.deposit("localStorage", profile.engine_id);
        upload(page.kind, profile.engine_id, category, query, page.effective_query, page_index,
               page.payload);
    }

    void visit_dummy()
    {
        session_.current_url = config_.dummy_url;
        session_.deposit("history", config_.dummy_url);
        upload(PageKind::Dummy, "localhost", std::nullopt, "", "", 0,
               build_service_payload(PageKind::Dummy, "localhost", kDummyPageBytes));
        event("dummy");
    }

    void upload(PageKind kind, const std::string& engine_id,
                std::optional<SearchCategory> category, const std::string& intended,
                const std::string& effective, int page_index, std::string payload)
    {
        PageUpload u;
        u.token = config_.token;
        u.agent_id = config_.agent_id;
        u.region = config_.region;
        u.browser_id = config_.browser.browser_id;
        u.timestamp = clock_.now();
        u.engine_id = engine_id;
        u.category = category;
        u.intended_query = intended;
        u.effective_query = effective;
        u.page_index = page_index;
        u.iteration = iteration_;
        u.kind = kind;
        u.payload = std::move(payload);
        TrackAck ack = tracker_.track(u);
        switch (ack.status) {
        case TrackAck::Status::Accepted:
            ++log_.uploads_accepted;
            break;
        case TrackAck::Status::Shed:
            ++log_.uploads_shed;
            break;
        case TrackAck::Status::Rejected:
            ++log_.uploads_rejected;
            event("upload_rejected", ack.reason);
            break;
        }
    }

    void clean(std::string_view detail)
    {
        session_ = clean_browser(std::move(session_), config_.browser);
        event("cleaned", std::string(detail));
    }

    SourceIdentity source() const { return SourceIdentity{config_.region, config_.agent_id}; }

    void abort_run(std::string reason)
    {
        log_.aborted = true;
        log_.abort_reason = reason;
        event("aborted", std::move(reason));
    }

    void event(std::string what, std::string detail = "")
    {
        log_.events.push_back({clock_.now(), std::move(what), std::move(detail)});
    }

    AgentConfig config_;
    const ExperimentDesign& design_;
    Clock& clock_;
    EngineClient& engines_;
    TrackerClient& tracker_;

    SessionState session_;
    std::vector<std::string> queries_;
    AgentLog log_;
    int iteration_ = 0;
};

/// Convenience wrapper matching the operation shape used in tests.
inline AgentLog run_agent(AgentConfig config, const ExperimentDesign& design, Clock& clock,
                          EngineClient& engines, TrackerClient& tracker)
{
    AgentRunner runner(std::move(config), design, clock, engines, tracker);
    return runner.run();
}

} // namespace auditsim
