#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "auditsim/agent.hpp"
#include "auditsim/clock.hpp"
#include "auditsim/collector.hpp"
#include "auditsim/design.hpp"
#include "auditsim/engine_fleet.hpp"
#include "auditsim/faults.hpp"
#include "auditsim/inprocess.hpp"

namespace auditsim {

enum class RunMode { SimulatedClock, WallClock };

struct RunSummary {
    std::vector<AgentLog> agent_logs;
    CollectorService::StatusCounts collector_status;
    std::filesystem::path collection_dir; // empty for in-memory runs
    std::vector<PageRecord> records;      // final snapshot
};

/// Engine ids in design order; the list the collector hands to agents.
inline std::vector<std::string> engine_id_list(const ExperimentDesign& design)
{
    std::vector<std::string> ids;
    ids.reserve(design.engines.size());
    for (const auto& e : design.engines)
        ids.push_back(e.engine_id);
    return ids;
}

inline CollectorService::Config collector_config(const ExperimentDesign& design,
                                                 const FaultsConfig& faults,
                                                 std::uint64_t seed,
                                                 const std::filesystem::path& out_dir)
{
    CollectorService::Config cfg;
    cfg.collection_id = design.collection_id;
    cfg.engine_ids = engine_id_list(design);
    cfg.queries = design.queries;
    cfg.allowed_tokens = roster_tokens(design);
    cfg.root = out_dir;
    cfg.capacity = faults.collector;
    cfg.seed = seed;
    return cfg;
}

inline AgentConfig agent_config_for(const AgentSpec& spec, const ExperimentDesign& design)
{
    AgentConfig cfg;
    cfg.agent_id = spec.agent_id;
    cfg.region = spec.region;
    const BrowserProfile* browser = design.find_browser(spec.browser_id);
    if (!browser)
        throw std::runtime_error("roster names unknown browser: " + spec.browser_id);
    cfg.browser = *browser;
    cfg.start_offset = spec.start_offset;
    cfg.token = spec.token;
    return cfg;
}

/// Runs one full collection in virtual time: collector, mock engine fleet
/// and the whole agent roster, interleaved deterministically by the virtual
/// scheduler. Completes in wall time proportional to the work, not to the
/// simulated span. Deterministic under (design, faults, seed).
inline RunSummary run_collection_simulated(const ExperimentDesign& design,
                                           const FaultsConfig& faults, std::uint64_t seed,
                                           const std::filesystem::path& out_dir = {})
{
    std::vector<std::string> violations = validate_design(design);
    if (!violations.empty())
        throw std::invalid_argument("design is invalid: " + violations.front());

    ExperimentDesign effective = design;
    apply_engine_overrides(effective.engines, faults);

    CollectorService collector(collector_config(effective, faults, seed, out_dir));
    MockEngineFleet fleet(effective.engines, faults, seed);

    const std::vector<AgentSpec> roster = build_roster(effective);
    std::vector<AgentLog> logs(roster.size());

    VirtualScheduler scheduler(effective.start_epoch);
    for (std::size_t i = 0; i < roster.size(); ++i) {
        const AgentSpec& spec = roster[i];
        scheduler.spawn(spec.agent_id, effective.start_epoch, [&, i, spec](Clock& clock) {
            InProcessEngineClient engine_client(fleet, clock);
            InProcessTrackerClient tracker_client(collector);
            logs[i] = run_agent(agent_config_for(spec, effective), effective, clock,
                                engine_client, tracker_client);
        });
    }
    scheduler.run();

    RunSummary summary;
    summary.agent_logs = std::move(logs);
    summary.collector_status = collector.status();
    summary.collection_dir = collector.collection_dir();
    summary.records = collector.snapshot();
    return summary;
}

} // namespace auditsim
