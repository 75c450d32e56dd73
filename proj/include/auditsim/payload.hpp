#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>

#include "auditsim/categories.hpp"
#include "auditsim/common.hpp"
#include "auditsim/pages.hpp"

namespace auditsim {

// Synthetic, parseable result markup. Realistic HTML is a non-goal; what
// matters is that post-processing can recover the request that produced a
// page from the page alone, and that the byte size is exactly the size the
// size model asked for.

namespace detail {

inline void pad_to(std::string& doc, std::int64_t target)
{
    static constexpr std::string_view kClose = "</body></html>\n";
    std::int64_t base = static_cast<std::int64_t>(doc.size() + kClose.size());
    if (base < target) {
        std::int64_t need = target - base;
        static constexpr std::string_view kOpen = "<!-- pad\n";
        static constexpr std::string_view kEnd = "-->\n";
        std::int64_t inner = need - static_cast<std::int64_t>(kOpen.size() + kEnd.size());
        if (inner >= 0) {
            doc += kOpen;
            doc.append(static_cast<std::size_t>(inner), '.');
            doc += kEnd;
        } else {
            doc.append(static_cast<std::size_t>(need), '.');
        }
    }
    doc += kClose;
}

} // namespace detail

/// A result page for (engine, category, query, page). Deterministic: the
/// same arguments always produce the same bytes. The document is padded (or
/// its result list shrunk) to land exactly on target_size when target_size
/// leaves room for the skeleton.
inline std::string build_result_payload(std::string_view engine_id, SearchCategory category,
                                        std::string_view effective_query, int page_index,
                                        std::int64_t target_size, bool terminal = false)
{
    for (int entries : {10, 3, 0}) {
        std::ostringstream doc;
        doc << "<!doctype html>\n<html><head><title>" << engine_id << " "
            << to_string(category) << " p" << page_index << "</title></head>\n"
            << "<body data-engine=\"" << engine_id << "\" data-category=\""
            << to_string(category) << "\" data-query=\"" << effective_query
            << "\" data-page=\"" << page_index << "\" data-kind=\""
            << (terminal ? "terminal" : "result") << "\">\n";
        if (terminal) {
            doc << "<p>no more results</p>\n";
        } else if (entries > 0) {
            doc << "<ol class=\"results\">\n";
            for (int i = 1; i <= entries; ++i)
                doc << "<li><a href=\"http://" << engine_id << ".example/" << to_string(category)
                    << "/" << page_index << "-" << i << "\">" << effective_query << " result "
                    << page_index << "-" << i << "</a></li>\n";
            doc << "</ol>\n";
        }
        std::string out = doc.str();
        if (static_cast<std::int64_t>(out.size()) + 15 <= target_size || entries == 0) {
            detail::pad_to(out, target_size);
            return out;
        }
    }
    return {}; // unreachable
}

/// Home, consent, captcha and dummy pages. `owner` is the engine id (or
/// "localhost" for the agent-hosted dummy page).
inline std::string build_service_payload(PageKind kind, std::string_view owner,
                                         std::int64_t target_size)
{
    std::ostringstream doc;
    doc << "<!doctype html>\n<html><head><title>" << owner << " " << to_string(kind)
        << "</title></head>\n<body data-engine=\"" << owner << "\" data-kind=\""
        << to_string(kind) << "\">\n";
    switch (kind) {
    case PageKind::Home:
        doc << "<form class=\"search\"><input name=\"q\"/><button>search</button></form>\n";
        break;
    case PageKind::Consent:
        doc << "<div class=\"consent\">we use cookies<button>accept</button></div>\n";
        break;
    case PageKind::Captcha:
        doc << "<div class=\"captcha\">confirm you are human</div>\n";
        break;
    case PageKind::Dummy:
        doc << "<p>cleanup stop</p>\n";
        break;
    case PageKind::Result:
        break;
    }
    std::string out = doc.str();
    detail::pad_to(out, target_size);
    return out;
}

// Fixed service page sizes; distinct values keep the byte ledger legible.
constexpr std::int64_t kHomePageBytes = 700;
constexpr std::int64_t kConsentPageBytes = 450;
constexpr std::int64_t kCaptchaPageBytes = 512;
constexpr std::int64_t kDummyPageBytes = 230;
constexpr std::int64_t kTerminalPageBytes = 320;

} // namespace auditsim
