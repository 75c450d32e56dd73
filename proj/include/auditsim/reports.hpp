#pragma once

#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "auditsim/analytics.hpp"
#include "auditsim/design.hpp"

namespace auditsim {

// Human-readable tables go to the terminal; the JSON shapes are the stable
// machine-readable form (field order is part of the format).

inline std::string render_coverage_text(const std::vector<CoverageCell>& grid,
                                        const ExperimentDesign& design)
{
    std::ostringstream out;
    out << "coverage (" << design.collection_id << ")\n";
    for (SearchCategory cat : kCategoryOrder) {
        bool any = false;
        for (const auto& cell : grid)
            if (cell.condition.category == cat)
                any = true;
        if (!any)
            continue;
        out << "  [" << to_string(cat) << "]\n";
        out << "    " << std::left << std::setw(16) << "engine";
        for (const auto& b : design.browsers)
            out << std::setw(14) << b.browser_id;
        out << "\n";
        for (const auto& engine : design.engines) {
            if (!engine.has_category(cat))
                continue;
            out << "    " << std::left << std::setw(16) << engine.engine_id;
            for (const auto& b : design.browsers) {
                bool found = false;
                for (const auto& cell : grid) {
                    if (cell.condition.category == cat &&
                        cell.condition.engine_id == engine.engine_id &&
                        cell.condition.browser_id == b.browser_id) {
                        std::ostringstream v;
                        v << std::fixed << std::setprecision(2) << cell.coverage << " ("
                          << cell.succeeded << "/" << cell.assigned << ")";
                        out << std::setw(14) << v.str();
                        found = true;
                        break;
                    }
                }
                if (!found)
                    out << std::setw(14) << "-";
            }
            out << "\n";
        }
    }
    return out.str();
}

inline nlohmann::ordered_json coverage_json(const std::vector<CoverageCell>& grid)
{
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& cell : grid) {
        nlohmann::ordered_json j;
        j["browser_id"] = cell.condition.browser_id;
        j["engine_id"] = cell.condition.engine_id;
        j["category"] = std::string(to_string(cell.condition.category));
        j["succeeded"] = cell.succeeded;
        j["assigned"] = cell.assigned;
        j["coverage"] = cell.coverage;
        rows.push_back(j);
    }
    return rows;
}

inline std::string render_sections_text(const std::vector<SectionStats>& stats,
                                        const std::vector<std::string>& omitted = {})
{
    std::ostringstream out;
    out << "section sizes (exact cases, mean with 99% bootstrap CI)\n";
    out << "  " << std::left << std::setw(16) << "engine" << std::setw(10) << "category"
        << std::right << std::setw(8) << "n" << std::setw(14) << "mean" << std::setw(26)
        << "ci" << "\n";
    for (const auto& s : stats) {
        out << "  " << std::left << std::setw(16) << s.engine_id << std::setw(10)
            << to_string(s.category) << std::right << std::setw(8) << s.n << std::setw(14)
            << format_bytes(s.mean_bytes) << std::setw(13) << format_bytes(s.ci.low) << " .. "
            << format_bytes(s.ci.high) << "\n";
    }
    for (const auto& pair : omitted)
        out << "  " << pair << ": no exact sections, omitted\n";
    return out.str();
}

inline nlohmann::ordered_json sections_json(const std::vector<SectionStats>& stats)
{
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (const auto& s : stats) {
        nlohmann::ordered_json j;
        j["engine_id"] = s.engine_id;
        j["category"] = std::string(to_string(s.category));
        j["n"] = s.n;
        j["mean_bytes"] = s.mean_bytes;
        j["ci_low_bytes"] = s.ci.low;
        j["ci_high_bytes"] = s.ci.high;
        rows.push_back(j);
    }
    return rows;
}

inline std::string render_sizes_text(const SizeReport& report)
{
    std::ostringstream out;
    auto row = [&](const char* name, std::int64_t v) {
        out << "  " << std::left << std::setw(16) << name << std::right << std::setw(16) << v
            << "  (" << format_bytes(static_cast<double>(v)) << ")\n";
    };
    out << "size ledger (bytes)\n";
    row("full", report.full_bytes);
    row("effective", report.effective_bytes);
    row("exact_cases", report.exact_case_bytes);
    if (report.in_sample_bytes)
        row("in_sample", *report.in_sample_bytes);
    else
        out << "  in_sample       unavailable\n";
    if (report.out_of_sample_bytes)
        row("out_of_sample", *report.out_of_sample_bytes);
    else
        out << "  out_of_sample   unavailable (no held-out collection)\n";
    return out.str();
}

inline nlohmann::ordered_json sizes_json(const SizeReport& report)
{
    nlohmann::ordered_json j;
    j["full_bytes"] = report.full_bytes;
    j["effective_bytes"] = report.effective_bytes;
    j["exact_case_bytes"] = report.exact_case_bytes;
    if (report.in_sample_bytes)
        j["in_sample_bytes"] = *report.in_sample_bytes;
    else
        j["in_sample_bytes"] = nullptr;
    if (report.out_of_sample_bytes)
        j["out_of_sample_bytes"] = *report.out_of_sample_bytes;
    else
        j["out_of_sample_bytes"] = nullptr;
    return j;
}

} // namespace auditsim
