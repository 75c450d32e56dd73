#pragma once

#include <set>
#include <stdexcept>
#include <utility>
#include <vector>

#include "auditsim/categories.hpp"
#include "auditsim/navigation.hpp"
#include "auditsim/profiles.hpp"

namespace auditsim {

using RoutinePlan = std::vector<std::pair<SearchCategory, NavigationMode>>;

/// Category walk for one engine: text, news, images, videos in that order,
/// skipping categories the engine does not serve.
inline RoutinePlan routine_plan(const EngineProfile& profile)
{
    RoutinePlan plan;
    plan.reserve(profile.per_category.size());
    for (SearchCategory cat : kCategoryOrder) {
        auto it = profile.per_category.find(cat);
        if (it != profile.per_category.end())
            plan.emplace_back(cat, it->second);
    }
    return plan;
}

/// Snapshot counts that make a section of this category "exact".
inline const std::set<int>& expected_snapshots(const EngineProfile& profile,
                                               SearchCategory category)
{
    auto it = profile.expected_counts.find(category);
    if (it == profile.expected_counts.end())
        throw std::out_of_range("expected_snapshots: engine '" + profile.engine_id +
                                "' has no category '" + std::string(to_string(category)) + "'");
    return it->second;
}

/// Largest acceptable snapshot count; pagination never runs past this.
inline int max_expected_snapshots(const EngineProfile& profile, SearchCategory category)
{
    const auto& counts = expected_snapshots(profile, category);
    return *counts.rbegin();
}

} // namespace auditsim
