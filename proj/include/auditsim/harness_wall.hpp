#pragma once

#include <thread>
#include <vector>

#include "auditsim/collector_http.hpp"
#include "auditsim/engine_http.hpp"
#include "auditsim/harness.hpp"

namespace auditsim {

/// Wall-clock run: real HTTP servers for the collector and the engine fleet,
/// one OS thread per agent, real minute boundaries. Intended for operator
/// runs; tests use the simulated variant.
inline RunSummary run_collection_wall(const ExperimentDesign& design, const FaultsConfig& faults,
                                      std::uint64_t seed, const std::filesystem::path& out_dir,
                                      int collector_port = 0, int engines_port = 0)
{
    std::vector<std::string> violations = validate_design(design);
    if (!violations.empty())
        throw std::invalid_argument("design is invalid: " + violations.front());

    ExperimentDesign effective = design;
    apply_engine_overrides(effective.engines, faults);

    CollectorService collector(collector_config(effective, faults, seed, out_dir));
    CollectorHttpServer collector_server(collector);
    collector_server.start("127.0.0.1", collector_port);

    MockEngineFleet fleet(effective.engines, faults, seed);
    EngineHttpServer engine_server(fleet);
    engine_server.start("127.0.0.1", engines_port);

    const std::vector<AgentSpec> roster = build_roster(effective);
    std::vector<AgentLog> logs(roster.size());
    std::vector<std::thread> threads;
    threads.reserve(roster.size());
    for (std::size_t i = 0; i < roster.size(); ++i) {
        const AgentSpec& spec = roster[i];
        threads.emplace_back([&, i, spec] {
            WallClock clock;
            HttpEngineClient engine_client(engine_server.base_url(), clock);
            HttpTrackerClient tracker_client(collector_server.base_url());
            AgentConfig cfg = agent_config_for(spec, effective);
            cfg.collector_url = collector_server.base_url();
            logs[i] = run_agent(std::move(cfg), effective, clock, engine_client, tracker_client);
        });
    }
    for (auto& t : threads)
        t.join();

    // Drain before tearing the servers down so in-flight ingests finish.
    engine_server.stop();
    collector_server.stop();

    RunSummary summary;
    summary.agent_logs = std::move(logs);
    summary.collector_status = collector.status();
    summary.collection_dir = collector.collection_dir();
    summary.records = collector.snapshot();
    return summary;
}

} // namespace auditsim
