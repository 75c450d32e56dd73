#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace auditsim {

/// Search result categories, in the fixed order routines visit them.
enum class SearchCategory { Text = 0, News = 1, Images = 2, Videos = 3 };

inline constexpr std::array<SearchCategory, 4> kCategoryOrder = {
    SearchCategory::Text,
    SearchCategory::News,
    SearchCategory::Images,
    SearchCategory::Videos,
};

inline constexpr std::string_view to_string(SearchCategory c)
{
    switch (c) {
    case SearchCategory::Text: return "text";
    case SearchCategory::News: return "news";
    case SearchCategory::Images: return "images";
    case SearchCategory::Videos: return "videos";
    }
    return "text";
}

inline std::optional<SearchCategory> parse_category(std::string_view s)
{
    if (s == "text") return SearchCategory::Text;
    if (s == "news") return SearchCategory::News;
    if (s == "images") return SearchCategory::Images;
    if (s == "videos") return SearchCategory::Videos;
    return std::nullopt;
}

inline SearchCategory category_from_string(std::string_view s)
{
    auto c = parse_category(s);
    if (!c)
        throw std::invalid_argument("unknown search category: " + std::string(s));
    return *c;
}

inline constexpr int category_index(SearchCategory c) { return static_cast<int>(c); }

} // namespace auditsim
