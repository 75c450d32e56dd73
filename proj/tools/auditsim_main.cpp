// auditsim: validate experiment designs, run simulated collections, and
// compute coverage/size analytics from a collection's manifest.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "auditsim/analytics.hpp"
#include "auditsim/config_io.hpp"
#include "auditsim/harness.hpp"
#include "auditsim/harness_wall.hpp"
#include "auditsim/reports.hpp"

namespace {

int env_port(const char* name)
{
    const char* value = std::getenv(name);
    return value ? std::atoi(value) : 0;
}

int cmd_validate(const std::string& design_path)
{
    auto design = auditsim::load_design_file(design_path);
    auto violations = auditsim::validate_design(design);
    if (violations.empty()) {
        std::cout << "OK: " << design.collection_id << " (" << design.agents << " agents, "
                  << design.engine_count() << " engines, " << design.query_count()
                  << " queries)\n";
        return 0;
    }
    std::cout << violations.size() << " violation(s):\n";
    for (const auto& v : violations)
        std::cout << "  - " << v << "\n";
    return 1;
}

int cmd_run(const std::string& design_path, const std::string& mode, std::uint64_t seed,
            const std::string& faults_path, const std::string& out_dir)
{
    auto design = auditsim::load_design_file(design_path);
    auditsim::FaultsConfig faults;
    if (!faults_path.empty())
        faults = auditsim::load_faults_file(faults_path);

    auditsim::RunSummary summary;
    if (mode == "sim") {
        summary = auditsim::run_collection_simulated(design, faults, seed, out_dir);
    } else if (mode == "wall") {
        summary = auditsim::run_collection_wall(design, faults, seed, out_dir,
                                                env_port("AUDITSIM_COLLECTOR_PORT"),
                                                env_port("AUDITSIM_ENGINES_PORT"));
    } else {
        std::cerr << "unknown mode '" << mode << "' (expected sim or wall)\n";
        return 2;
    }

    if (!summary.collection_dir.empty())
        auditsim::save_design_file(design, summary.collection_dir / "design.json");

    std::int64_t aborted = 0;
    for (const auto& log : summary.agent_logs)
        aborted += log.aborted ? 1 : 0;
    std::cout << "collection " << design.collection_id << ": " << summary.collector_status.records
              << " pages, " << auditsim::format_bytes(static_cast<double>(
                                   summary.collector_status.bytes))
              << ", " << summary.agent_logs.size() << " agents (" << aborted << " aborted), "
              << summary.collector_status.shed << " uploads shed\n";
    if (!summary.collection_dir.empty())
        std::cout << "manifest: " << (summary.collection_dir / "manifest.log").string() << "\n";
    return aborted == 0 ? 0 : 1;
}

int cmd_analyze(const std::string& collection_dir, const std::string& design_path,
                const std::string& holdout_dir, const std::string& holdout_design_path,
                const std::string& out_dir, int resamples, std::uint64_t seed)
{
    namespace fs = std::filesystem;
    auto design = auditsim::load_design_file(design_path);
    fs::path manifest = fs::path(collection_dir) / "manifest.log";
    auto records = auditsim::classify(auditsim::load_manifest(manifest), design);

    auto grid = auditsim::coverage(records, design);
    auditsim::SectionStatsOptions opts;
    opts.resamples = resamples;
    opts.seed = seed;
    std::vector<std::string> omitted;
    auto stats = auditsim::section_stats(records, design, opts, &omitted);
    auto report = auditsim::sizes(records, design);
    report.in_sample_bytes = auditsim::estimate_size(stats, design).bytes;

    if (!holdout_dir.empty()) {
        auto holdout_design = auditsim::load_design_file(holdout_design_path);
        auto holdout_records = auditsim::classify(
            auditsim::load_manifest(fs::path(holdout_dir) / "manifest.log"), holdout_design);
        report.out_of_sample_bytes =
            auditsim::estimate_out_of_sample(holdout_records, holdout_design, design, opts).bytes;
    }

    std::cout << auditsim::render_coverage_text(grid, design) << "\n"
              << auditsim::render_sections_text(stats, omitted) << "\n"
              << auditsim::render_sizes_text(report);

    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        std::ofstream(fs::path(out_dir) / "coverage.json")
            << auditsim::coverage_json(grid).dump(2) << "\n";
        std::ofstream(fs::path(out_dir) / "sections.json")
            << auditsim::sections_json(stats).dump(2) << "\n";
        std::ofstream(fs::path(out_dir) / "sizes.json")
            << auditsim::sizes_json(report).dump(2) << "\n";
        std::cout << "reports written to " << out_dir << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"simulated search-engine audit fleet"};
    app.require_subcommand(1);

    std::string design_path;
    std::string mode = "sim";
    std::uint64_t seed = 1;
    std::string faults_path;
    std::string out_dir = "out";
    std::string collection_dir;
    std::string holdout_dir;
    std::string holdout_design_path;
    std::string report_dir;
    int resamples = 10000;

    auto* validate = app.add_subcommand("validate", "check a design file");
    validate->add_option("--design", design_path, "design file (JSON)")->required();

    auto* run = app.add_subcommand("run", "run a collection");
    run->add_option("--design", design_path, "design file (JSON)")->required();
    run->add_option("--mode", mode, "sim (virtual time) or wall (real time)");
    run->add_option("--seed", seed, "run seed");
    run->add_option("--faults", faults_path, "faults file (JSON)");
    run->add_option("--out", out_dir, "output root for the collection");

    auto* analyze = app.add_subcommand("analyze", "coverage and size reports");
    analyze->add_option("--collection", collection_dir, "collection directory")->required();
    analyze->add_option("--design", design_path, "design file (JSON)")->required();
    analyze->add_option("--holdout", holdout_dir, "held-out collection for out-of-sample");
    analyze->add_option("--holdout-design", holdout_design_path, "design of the held-out collection");
    analyze->add_option("--out", report_dir, "directory for machine-readable reports");
    analyze->add_option("--resamples", resamples, "bootstrap resample count");
    analyze->add_option("--seed", seed, "bootstrap seed");

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed())
            return cmd_validate(design_path);
        if (run->parsed())
            return cmd_run(design_path, mode, seed, faults_path, out_dir);
        if (analyze->parsed()) {
            if (!holdout_dir.empty() && holdout_design_path.empty()) {
                std::cerr << "--holdout requires --holdout-design\n";
                return 2;
            }
            return cmd_analyze(collection_dir, design_path, holdout_dir, holdout_design_path,
                               report_dir, resamples, seed);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
