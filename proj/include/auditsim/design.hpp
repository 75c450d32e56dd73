#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "auditsim/common.hpp"
#include "auditsim/profiles.hpp"
#include "auditsim/rotation.hpp"

namespace auditsim {

/// One data collection: which engines and queries, how many agents spread
/// over which regions and browsers, and the timing contract every agent
/// follows.
struct ExperimentDesign {
    std::string collection_id;
    std::vector<EngineProfile> engines; // ordered; order drives rotation
    std::vector<std::string> queries;   // ordered; duplicates are legal
    int agents = 0;
    std::vector<std::string> regions;
    std::vector<BrowserProfile> browsers;
    int iterations = 1;
    std::int64_t cycle_seconds = 420;
    std::int64_t routine_budget_seconds = 240;
    std::int64_t readiness_check_seconds = 375;
    int max_reloads = 5;
    TimeMs start_epoch = 0; // epoch milliseconds
    TimeMs end_epoch = 0;

    TimeMs cycle_ms() const { return seconds(cycle_seconds); }
    TimeMs readiness_ms() const { return seconds(readiness_check_seconds); }
    TimeMs budget_ms() const { return seconds(routine_budget_seconds); }

    int engine_count() const { return static_cast<int>(engines.size()); }
    int query_count() const { return static_cast<int>(queries.size()); }

    const EngineProfile* find_engine(std::string_view id) const
    {
        for (const auto& e : engines)
            if (e.engine_id == id)
                return &e;
        return nullptr;
    }

    const BrowserProfile* find_browser(std::string_view id) const
    {
        for (const auto& b : browsers)
            if (b.browser_id == id)
                return &b;
        return nullptr;
    }

    bool has_query(std::string_view q) const
    {
        return std::find(queries.begin(), queries.end(), q) != queries.end();
    }
};

/// Checks every design invariant and returns one human-readable line per
/// violation; an empty list means the design is runnable. Pure: never
/// throws, never mutates.
inline std::vector<std::string> validate_design(const ExperimentDesign& d)
{
    std::vector<std::string> violations;
    auto flag = [&](std::string msg) { violations.push_back(std::move(msg)); };

    if (d.collection_id.empty())
        flag("collection_id is empty");
    if (d.engines.empty())
        flag("engine list is empty");
    if (d.queries.empty())
        flag("query list is empty");
    if (d.regions.empty())
        flag("region list is empty");
    if (d.browsers.empty())
        flag("browser list is empty");
    if (d.iterations < 1)
        flag("iterations must be at least 1");
    if (d.agents < 1)
        flag("agent count must be at least 1");
    else if (d.agents < d.engine_count())
        flag("agent count (" + std::to_string(d.agents) +
             ") is below the engine count (" + std::to_string(d.engine_count()) +
             "); one agent per starting engine is required per region/browser cell");
    if (d.max_reloads < 1)
        flag("max_reloads must be at least 1");

    if (d.cycle_seconds <= 0 || d.readiness_check_seconds <= 0 || d.routine_budget_seconds <= 0)
        flag("cycle, readiness check and routine budget must all be positive");
    if (d.readiness_check_seconds >= d.cycle_seconds)
        flag("readiness check (" + std::to_string(d.readiness_check_seconds) +
             " s) must be shorter than the cycle (" + std::to_string(d.cycle_seconds) + " s)");
    if (d.routine_budget_seconds >= d.readiness_check_seconds)
        flag("routine budget (" + std::to_string(d.routine_budget_seconds) +
             " s) must be shorter than the readiness check (" +
             std::to_string(d.readiness_check_seconds) + " s)");
    if (d.end_epoch <= d.start_epoch)
        flag("end_epoch must be after start_epoch");

    std::set<std::string> engine_ids;
    for (const auto& e : d.engines) {
        if (e.engine_id.empty())
            flag("an engine profile has an empty engine_id");
        if (!engine_ids.insert(e.engine_id).second)
            flag("duplicate engine_id '" + e.engine_id + "'");
        for (const auto& [cat, mode] : e.per_category) {
            if (mode.count < 1)
                flag("engine '" + e.engine_id + "' category '" + std::string(to_string(cat)) +
                     "' has a navigation count below 1");
            auto exp = e.expected_counts.find(cat);
            if (exp == e.expected_counts.end() || exp->second.empty())
                flag("engine '" + e.engine_id + "' category '" + std::string(to_string(cat)) +
                     "' has no expected snapshot counts");
        }
        for (const auto& [cat, counts] : e.expected_counts) {
            (void)counts;
            if (!e.has_category(cat))
                flag("engine '" + e.engine_id + "' lists expected counts for absent category '" +
                     std::string(to_string(cat)) + "'");
        }
        if (e.captcha_policy) {
            if (e.captcha_policy->threshold < 1)
                flag("engine '" + e.engine_id + "' captcha threshold must be at least 1");
            if (e.captcha_policy->blocked_categories.empty())
                flag("engine '" + e.engine_id + "' captcha policy blocks no category");
            for (SearchCategory cat : e.captcha_policy->blocked_categories)
                if (cat != SearchCategory::Text && cat != SearchCategory::News)
                    flag("engine '" + e.engine_id + "' captcha policy blocks '" +
                         std::string(to_string(cat)) + "'; only text and news can be blocked");
        }
    }

    std::set<std::string> browser_ids;
    for (const auto& b : d.browsers) {
        if (!browser_ids.insert(b.browser_id).second)
            flag("duplicate browser_id '" + b.browser_id + "'");
        if (b.clean_data_types != chrome_clean_data_types() &&
            b.clean_data_types != firefox_clean_data_types())
            flag("browser '" + b.browser_id +
                 "' clean_data_types matches neither the 13-entry chrome-like list nor the "
                 "8-entry firefox-like list");
    }

    return violations;
}

// ---------------------------------------------------------------------------
// Agent roster.
//
// Agents are spread round-robin over the region x browser cells; inside a
// cell each agent takes the next engine start offset, wrapping at the engine
// count. With agents == regions x browsers x engines this is exactly one
// agent per starting engine per cell.
// ---------------------------------------------------------------------------

struct AgentSpec {
    std::string agent_id;
    std::string region;
    std::string browser_id;
    int start_offset = 0;
    std::string token;
};

inline std::vector<AgentSpec> build_roster(const ExperimentDesign& d)
{
    std::vector<AgentSpec> roster;
    if (d.regions.empty() || d.browsers.empty() || d.engines.empty() || d.agents < 1)
        return roster;
    const int cells = static_cast<int>(d.regions.size() * d.browsers.size());
    const int browsers = static_cast<int>(d.browsers.size());
    roster.reserve(static_cast<std::size_t>(d.agents));
    for (int i = 0; i < d.agents; ++i) {
        const int cell = i % cells;
        const int within_cell = i / cells;
        AgentSpec spec;
        char idbuf[32];
        std::snprintf(idbuf, sizeof idbuf, "agent-%03d", i);
        spec.agent_id = idbuf;
        spec.region = d.regions[static_cast<std::size_t>(cell / browsers)];
        spec.browser_id = d.browsers[static_cast<std::size_t>(cell % browsers)].browser_id;
        spec.start_offset = within_cell % d.engine_count();
        spec.token = "token-" + spec.agent_id;
        roster.push_back(std::move(spec));
    }
    return roster;
}

/// Agent tokens the collector should accept for this design.
inline std::vector<std::string> roster_tokens(const ExperimentDesign& d)
{
    std::vector<std::string> tokens;
    for (const auto& spec : build_roster(d))
        tokens.push_back(spec.token);
    return tokens;
}

} // namespace auditsim
