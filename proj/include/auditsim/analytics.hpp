#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "auditsim/bootstrap.hpp"
#include "auditsim/design.hpp"
#include "auditsim/pages.hpp"
#include "auditsim/plan.hpp"
#include "auditsim/unicode.hpp"

namespace auditsim {

// ---------------------------------------------------------------------------
// Classification.
//
// Every record gets exactly one class. A result page is effective when it
// belongs to the design (engine and query), was collected inside the
// experiment window, and the engine searched for the query the agent meant
// (no autocorrection, no encoding damage). Intended queries are normalized
// before comparison; the effective query is taken verbatim as the engine
// reported it.
// ---------------------------------------------------------------------------

inline PageClass classify_record(const PageRecord& r, const ExperimentDesign& design)
{
    switch (r.kind) {
    case PageKind::Home: return PageClass::Home;
    case PageKind::Consent: return PageClass::Consent;
    case PageKind::Captcha: return PageClass::Captcha;
    case PageKind::Dummy: return PageClass::Dummy;
    case PageKind::Result: break;
    }
    if (design.find_engine(r.engine_id) == nullptr || !design.has_query(r.intended_query))
        return PageClass::UnintendedQuery;
    if (r.timestamp < design.start_epoch || r.timestamp > design.end_epoch)
        return PageClass::PostExperiment;
    if (r.effective_query != normalize_nfc_latin(r.intended_query))
        return PageClass::UnintendedQuery;
    return PageClass::EffectiveResult;
}

inline std::vector<PageRecord> classify(std::vector<PageRecord> records,
                                        const ExperimentDesign& design)
{
    for (auto& r : records)
        r.classification = classify_record(r, design);
    return records;
}

// ---------------------------------------------------------------------------
// Coverage.
// ---------------------------------------------------------------------------

/// One experimental condition: the cell key of the coverage grid.
struct Condition {
    std::string browser_id;
    std::string engine_id;
    SearchCategory category = SearchCategory::Text;

    bool operator<(const Condition& o) const
    {
        return std::tie(browser_id, engine_id, category) <
               std::tie(o.browser_id, o.engine_id, o.category);
    }
};

struct CoverageCell {
    Condition condition;
    int succeeded = 0; // agents with at least one effective result here
    int assigned = 0;  // agents expected under the condition
    double coverage = 0.0;
};

/// Coverage grid over (browser, engine, category). Every agent rotates over
/// every engine, so the denominator of a cell is the full set of agents
/// running that browser. Conditions absent from the design (an engine with
/// no news search) produce no cell at all.
inline std::vector<CoverageCell> coverage(const std::vector<PageRecord>& classified,
                                          const ExperimentDesign& design)
{
    std::map<std::string, int> agents_per_browser;
    for (const auto& spec : build_roster(design))
        ++agents_per_browser[spec.browser_id];

    std::map<Condition, std::set<std::string>> winners;
    for (const auto& r : classified) {
        if (r.classification != PageClass::EffectiveResult || !r.category)
            continue;
        winners[{r.browser_id, r.engine_id, *r.category}].insert(r.agent_id);
    }

    std::vector<CoverageCell> grid;
    for (const auto& browser : design.browsers) {
        for (const auto& engine : design.engines) {
            for (SearchCategory cat : kCategoryOrder) {
                if (!engine.has_category(cat))
                    continue;
                CoverageCell cell;
                cell.condition = {browser.browser_id, engine.engine_id, cat};
                cell.assigned = agents_per_browser[browser.browser_id];
                if (cell.assigned == 0)
                    throw std::runtime_error(
                        "coverage: condition present in the design but no agent is assigned "
                        "to browser '" +
                        browser.browser_id + "'");
                auto it = winners.find(cell.condition);
                cell.succeeded = it == winners.end() ? 0 : static_cast<int>(it->second.size());
                cell.coverage = static_cast<double>(cell.succeeded) / cell.assigned;
                grid.push_back(std::move(cell));
            }
        }
    }
    return grid;
}

// ---------------------------------------------------------------------------
// Sizes.
// ---------------------------------------------------------------------------

/// A section is one (agent, engine, category, query, iteration) group of
/// effective result pages; it is exact when its snapshot count is one the
/// engine profile accepts.
struct SectionKey {
    std::string agent_id;
    std::string engine_id;
    SearchCategory category = SearchCategory::Text;
    std::string query;
    int iteration = 0;

    bool operator<(const SectionKey& o) const
    {
        return std::tie(agent_id, engine_id, category, query, iteration) <
               std::tie(o.agent_id, o.engine_id, o.category, o.query, o.iteration);
    }
};

struct SectionAccumulator {
    int snapshots = 0;
    std::int64_t bytes = 0;
};

inline std::map<SectionKey, SectionAccumulator>
collect_sections(const std::vector<PageRecord>& classified)
{
    std::map<SectionKey, SectionAccumulator> sections;
    for (const auto& r : classified) {
        if (r.classification != PageClass::EffectiveResult || !r.category)
            continue;
        auto& acc =
            sections[{r.agent_id, r.engine_id, *r.category, r.intended_query, r.iteration}];
        ++acc.snapshots;
        acc.bytes += r.byte_size;
    }
    return sections;
}

inline bool section_is_exact(const SectionKey& key, const SectionAccumulator& acc,
                             const ExperimentDesign& design)
{
    const EngineProfile* engine = design.find_engine(key.engine_id);
    if (!engine || !engine->has_category(key.category))
        return false;
    return expected_snapshots(*engine, key.category).count(acc.snapshots) != 0;
}

/// The five-row size ledger. The estimate rows stay unset until the
/// estimators fill them.
struct SizeReport {
    std::int64_t full_bytes = 0;
    std::int64_t effective_bytes = 0;
    std::int64_t exact_case_bytes = 0;
    std::optional<std::int64_t> in_sample_bytes;
    std::optional<std::int64_t> out_of_sample_bytes;
};

inline SizeReport sizes(const std::vector<PageRecord>& classified,
                        const ExperimentDesign& design)
{
    SizeReport report;
    for (const auto& r : classified) {
        report.full_bytes += r.byte_size;
        if (r.classification == PageClass::EffectiveResult)
            report.effective_bytes += r.byte_size;
    }
    for (const auto& [key, acc] : collect_sections(classified))
        if (section_is_exact(key, acc, design))
            report.exact_case_bytes += acc.bytes;
    return report;
}

/// Bytes per class; summing the map reproduces the full size exactly.
inline std::map<PageClass, std::int64_t>
class_byte_partition(const std::vector<PageRecord>& classified)
{
    std::map<PageClass, std::int64_t> partition;
    for (const auto& r : classified)
        partition[r.classification] += r.byte_size;
    return partition;
}

// ---------------------------------------------------------------------------
// Section statistics (exact cases only) and size estimation.
// ---------------------------------------------------------------------------

struct SectionStats {
    std::string engine_id;
    SearchCategory category = SearchCategory::Text;
    int n = 0; // exact sections
    double mean_bytes = 0;
    ConfidenceInterval ci; // 99% bootstrap by default
};

struct SectionStatsOptions {
    double level = 0.99;
    int resamples = 10000;
    std::uint64_t seed = 0;
};

/// Per-(engine, category) averages over exact-case section byte sums, with a
/// seeded percentile-bootstrap confidence interval. Pairs without a single
/// exact section are omitted (and listed in `omitted`, when given).
inline std::vector<SectionStats>
section_stats(const std::vector<PageRecord>& classified, const ExperimentDesign& design,
              const SectionStatsOptions& opts = {},
              std::vector<std::string>* omitted = nullptr)
{
    std::map<std::pair<std::string, SearchCategory>, std::vector<double>> groups;
    for (const auto& [key, acc] : collect_sections(classified))
        if (section_is_exact(key, acc, design))
            groups[{key.engine_id, key.category}].push_back(static_cast<double>(acc.bytes));

    std::vector<SectionStats> stats;
    for (const auto& engine : design.engines) {
        for (SearchCategory cat : kCategoryOrder) {
            if (!engine.has_category(cat))
                continue;
            auto it = groups.find({engine.engine_id, cat});
            if (it == groups.end() || it->second.empty()) {
                if (omitted)
                    omitted->push_back(engine.engine_id + "/" + std::string(to_string(cat)));
                continue;
            }
            SectionStats s;
            s.engine_id = engine.engine_id;
            s.category = cat;
            s.n = static_cast<int>(it->second.size());
            s.mean_bytes = sample_mean(it->second);
            std::uint64_t ci_seed = HashChain(opts.seed)
                                        .feed(engine.engine_id)
                                        .feed(to_string(cat))
                                        .digest();
            s.ci = bootstrap_mean_ci(it->second, opts.level, opts.resamples, ci_seed);
            stats.push_back(std::move(s));
        }
    }
    return stats;
}

/// Sections the design expects per (engine, category): exact enumeration of
/// every agent's rotation schedule, counting the steps that land on the
/// engine. With agents = regions x browsers x engines and E | Q*iterations
/// this reduces to agents x queries x iterations / engines.
inline std::map<std::pair<std::string, SearchCategory>, std::int64_t>
expected_section_counts(const ExperimentDesign& design)
{
    std::map<std::pair<std::string, SearchCategory>, std::int64_t> expected;
    const int engine_count = design.engine_count();
    const int steps = design.query_count() * design.iterations;
    std::vector<std::int64_t> visits(static_cast<std::size_t>(engine_count), 0);
    for (const auto& spec : build_roster(design))
        for (int k = 0; k < steps; ++k)
            ++visits[static_cast<std::size_t>((spec.start_offset + k) % engine_count)];
    for (int e = 0; e < engine_count; ++e) {
        const EngineProfile& profile = design.engines[static_cast<std::size_t>(e)];
        for (SearchCategory cat : kCategoryOrder)
            if (profile.has_category(cat))
                expected[{profile.engine_id, cat}] = visits[static_cast<std::size_t>(e)];
    }
    return expected;
}

enum class EstimateMode { InSample, OutOfSample };

struct SizeEstimate {
    std::int64_t bytes = 0;
    std::vector<std::string> missing_pairs; // pairs with no average available
};

/// Predicted collection size: per-(engine, category) mean exact section size
/// times the number of sections the design schedules for that pair.
inline SizeEstimate estimate_size(const std::vector<SectionStats>& stats,
                                  const ExperimentDesign& design)
{
    std::map<std::pair<std::string, SearchCategory>, double> means;
    for (const auto& s : stats)
        means[{s.engine_id, s.category}] = s.mean_bytes;

    SizeEstimate estimate;
    double total = 0;
    for (const auto& [pair, count] : expected_section_counts(design)) {
        auto it = means.find(pair);
        if (it == means.end()) {
            estimate.missing_pairs.push_back(pair.first + "/" +
                                             std::string(to_string(pair.second)));
            continue;
        }
        total += it->second * static_cast<double>(count);
    }
    estimate.bytes = static_cast<std::int64_t>(std::llround(total));
    return estimate;
}

/// In-sample estimate: averages from this collection's own exact sections.
inline SizeEstimate estimate_in_sample(const std::vector<PageRecord>& classified,
                                       const ExperimentDesign& design,
                                       const SectionStatsOptions& opts = {})
{
    return estimate_size(section_stats(classified, design, opts), design);
}

/// Out-of-sample estimate: averages from a held-out collection, restricted
/// to query terms that do not appear in this design. Throws when the holdout
/// shares every query with the design (no disjoint data).
inline SizeEstimate estimate_out_of_sample(const std::vector<PageRecord>& holdout_classified,
                                           const ExperimentDesign& holdout_design,
                                           const ExperimentDesign& design,
                                           const SectionStatsOptions& opts = {})
{
    std::vector<PageRecord> disjoint;
    bool any_effective = false;
    for (const auto& r : holdout_classified) {
        if (design.has_query(r.intended_query))
            continue;
        any_effective |= r.classification == PageClass::EffectiveResult;
        disjoint.push_back(r);
    }
    if (!any_effective)
        throw std::runtime_error(
            "out-of-sample estimate: the held-out collection has no effective results for "
            "query terms outside this design");
    return estimate_size(section_stats(disjoint, holdout_design, opts), design);
}

} // namespace auditsim
