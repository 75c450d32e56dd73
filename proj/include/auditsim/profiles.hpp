#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "auditsim/categories.hpp"
#include "auditsim/navigation.hpp"

namespace auditsim {

/// Throttling behaviour of an engine that starts prompting captchas once a
/// source has issued too many search requests. Only text and news results
/// are ever blocked; image and video search keeps working.
struct CaptchaPolicy {
    int threshold = 0; // search requests allowed per source before captchas
    std::set<SearchCategory> blocked_categories;
};

/// Whether an engine preserves query strings or mangles accented characters
/// into digit noise.
enum class EncodingPolicy { Faithful, LatinAccentCorrupting };

struct EngineProfile {
    std::string engine_id;
    std::string base_url;
    // Navigation plan per category; news may be absent entirely.
    std::map<SearchCategory, NavigationMode> per_category;
    // Acceptable snapshot counts per category. A set rather than a scalar:
    // some engines legitimately serve a varying number of pages.
    std::map<SearchCategory, std::set<int>> expected_counts;
    bool consent_banner = false;
    std::optional<CaptchaPolicy> captcha_policy;
    std::map<std::string, std::string> autocorrect_map;
    EncodingPolicy encoding_policy = EncodingPolicy::Faithful;

    bool has_category(SearchCategory c) const { return per_category.count(c) != 0; }
};

struct BrowserProfile {
    std::string browser_id;
    std::vector<std::string> clean_data_types; // ordered
};

// ---------------------------------------------------------------------------
// Built-in browser profiles. The two cleaning lists are fixed; a valid
// browser profile must carry exactly one of them.
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& chrome_clean_data_types()
{
    static const std::vector<std::string> kList = {
        "appcache",  "cache",      "cacheStorage", "cookies",        "fileSystems",
        "formData",  "history",    "indexedDB",    "localStorage",   "pluginData",
        "passwords", "serviceWorkers", "webSQL",
    };
    return kList;
}

inline const std::vector<std::string>& firefox_clean_data_types()
{
    static const std::vector<std::string> kList = {
        "cache",        "cookies",    "formData",  "history",
        "indexedDB",    "localStorage", "pluginData", "passwords",
    };
    return kList;
}

inline BrowserProfile chrome_like_browser()
{
    return BrowserProfile{"chrome-like", chrome_clean_data_types()};
}

inline BrowserProfile firefox_like_browser()
{
    return BrowserProfile{"firefox-like", firefox_clean_data_types()};
}

inline std::optional<BrowserProfile> browser_preset(std::string_view id)
{
    if (id == "chrome-like") return chrome_like_browser();
    if (id == "firefox-like") return firefox_like_browser();
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Built-in engine profiles. Navigation plans and snapshot expectations mirror
// the per-engine routines of the audited fleet; captcha policies, autocorrect
// entries and fault behaviour are attached per scenario, not here, so the
// default fleet runs clean.
// ---------------------------------------------------------------------------

namespace detail {

inline EngineProfile make_engine(std::string id,
                                 std::map<SearchCategory, NavigationMode> plan,
                                 bool consent,
                                 std::map<SearchCategory, std::set<int>> expected = {})
{
    EngineProfile p;
    p.engine_id = id;
    p.base_url = "http://engines.local/" + id;
    p.per_category = std::move(plan);
    p.consent_banner = consent;
    for (const auto& [cat, mode] : p.per_category) {
        auto it = expected.find(cat);
        p.expected_counts[cat] = (it != expected.end()) ? it->second : std::set<int>{mode.count};
    }
    return p;
}

} // namespace detail

inline EngineProfile google_like_engine()
{
    using C = SearchCategory;
    return detail::make_engine("google-like",
                               {{C::Text, paginated(5)},
                                {C::News, paginated(5)},
                                {C::Images, continuous(3)},
                                {C::Videos, paginated(5)}},
                               /*consent=*/true);
}

inline EngineProfile bing_like_engine()
{
    using C = SearchCategory;
    // Text pagination genuinely varies between 7 and 8 result pages; the
    // acceptance set records both counts as complete.
    return detail::make_engine("bing-like",
                               {{C::Text, paginated(8)},
                                {C::News, continuous(10)},
                                {C::Images, continuous(10)},
                                {C::Videos, continuous(14)}},
                               /*consent=*/true,
                               {{C::Text, {7, 8}}});
}

inline EngineProfile ddg_like_engine()
{
    using C = SearchCategory;
    return detail::make_engine("ddg-like",
                               {{C::Text, continuous(3)},
                                {C::News, continuous(3)},
                                {C::Images, continuous(4)},
                                {C::Videos, continuous(3)}},
                               /*consent=*/false);
}

inline EngineProfile yahoo_like_engine()
{
    using C = SearchCategory;
    return detail::make_engine("yahoo-like",
                               {{C::Text, paginated(5)},
                                {C::News, paginated(5)},
                                {C::Images, continuous_with_click(5)},
                                {C::Videos, continuous_with_click(3)}},
                               /*consent=*/true);
}

inline EngineProfile yandex_like_engine()
{
    using C = SearchCategory;
    // Text and news deliberately stop at the first result page; collecting
    // more is what provokes the captcha wall.
    return detail::make_engine("yandex-like",
                               {{C::Text, paginated(1)},
                                {C::News, paginated(1)},
                                {C::Images, continuous(3)},
                                {C::Videos, continuous_with_click(3)}},
                               /*consent=*/true);
}

inline EngineProfile baidu_like_engine()
{
    using C = SearchCategory;
    auto p = detail::make_engine("baidu-like",
                                 {{C::Text, paginated(5)},
                                  {C::News, paginated(5)},
                                  {C::Images, continuous(7)},
                                  {C::Videos, continuous(7)}},
                                 /*consent=*/false);
    p.encoding_policy = EncodingPolicy::LatinAccentCorrupting;
    return p;
}

inline EngineProfile sogou_like_engine()
{
    using C = SearchCategory;
    // No news search.
    return detail::make_engine("sogou-like",
                               {{C::Text, paginated(5)},
                                {C::Images, continuous(6)},
                                {C::Videos, paginated(5, {Quirk::PushStateUrl})}},
                               /*consent=*/false);
}

inline EngineProfile so_like_engine()
{
    using C = SearchCategory;
    // No news search either; video search lives on a separate host after a
    // redirect.
    return detail::make_engine("so-like",
                               {{C::Text, paginated(5, {Quirk::WaitAfterScroll})},
                                {C::Images, continuous(10)},
                                {C::Videos, paginated(5, {Quirk::Redirect})}},
                               /*consent=*/false);
}

inline std::optional<EngineProfile> engine_preset(std::string_view id)
{
    if (id == "google-like") return google_like_engine();
    if (id == "bing-like") return bing_like_engine();
    if (id == "ddg-like") return ddg_like_engine();
    if (id == "yahoo-like") return yahoo_like_engine();
    if (id == "yandex-like") return yandex_like_engine();
    if (id == "baidu-like") return baidu_like_engine();
    if (id == "sogou-like") return sogou_like_engine();
    if (id == "so-like") return so_like_engine();
    return std::nullopt;
}

/// The six engines most collections share, in the column order reports use.
inline std::vector<EngineProfile> default_engine_fleet()
{
    return {baidu_like_engine(), bing_like_engine(),  ddg_like_engine(),
            google_like_engine(), yahoo_like_engine(), yandex_like_engine()};
}

} // namespace auditsim
