#pragma once

#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

namespace auditsim {

/// How an agent walks one result category.
///
/// Paginated: classic next-page navigation over `count` result pages.
/// Continuous: scroll-triggered loading of `count` result page sections.
/// ContinuousWithClick: continuous loading where each section additionally
/// requires a "load more" click.
enum class NavigationKind { Paginated, Continuous, ContinuousWithClick };

/// Engine-specific oddities the navigation has to accommodate. They do not
/// change request counts, only how the simulated walk is annotated.
enum class Quirk { WaitAfterScroll, PushStateUrl, Redirect };

struct NavigationMode {
    NavigationKind kind = NavigationKind::Paginated;
    int count = 1; // pages for Paginated, sections otherwise; >= 1
    std::set<Quirk> quirks;

    bool paginated() const { return kind == NavigationKind::Paginated; }

    bool operator==(const NavigationMode& other) const
    {
        return kind == other.kind && count == other.count && quirks == other.quirks;
    }
};

inline NavigationMode paginated(int pages, std::set<Quirk> quirks = {})
{
    if (pages < 1)
        throw std::invalid_argument("paginated mode needs pages >= 1");
    return NavigationMode{NavigationKind::Paginated, pages, std::move(quirks)};
}

inline NavigationMode continuous(int sections, std::set<Quirk> quirks = {})
{
    if (sections < 1)
        throw std::invalid_argument("continuous mode needs sections >= 1");
    return NavigationMode{NavigationKind::Continuous, sections, std::move(quirks)};
}

inline NavigationMode continuous_with_click(int sections, std::set<Quirk> quirks = {})
{
    if (sections < 1)
        throw std::invalid_argument("continuous mode needs sections >= 1");
    return NavigationMode{NavigationKind::ContinuousWithClick, sections, std::move(quirks)};
}

inline constexpr std::string_view to_string(NavigationKind k)
{
    switch (k) {
    case NavigationKind::Paginated: return "paginated";
    case NavigationKind::Continuous: return "continuous";
    case NavigationKind::ContinuousWithClick: return "continuous_with_click";
    }
    return "paginated";
}

inline constexpr std::string_view to_string(Quirk q)
{
    switch (q) {
    case Quirk::WaitAfterScroll: return "wait_after_scroll";
    case Quirk::PushStateUrl: return "push_state_url";
    case Quirk::Redirect: return "redirect";
    }
    return "wait_after_scroll";
}

} // namespace auditsim
