#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "auditsim/categories.hpp"
#include "auditsim/common.hpp"

namespace auditsim {

/// What a visited page is, from the protocol's point of view.
enum class PageKind { Result, Home, Consent, Captcha, Dummy };

inline constexpr std::string_view to_string(PageKind k)
{
    switch (k) {
    case PageKind::Result: return "result";
    case PageKind::Home: return "home";
    case PageKind::Consent: return "consent";
    case PageKind::Captcha: return "captcha";
    case PageKind::Dummy: return "dummy";
    }
    return "result";
}

inline std::optional<PageKind> parse_page_kind(std::string_view s)
{
    if (s == "result") return PageKind::Result;
    if (s == "home") return PageKind::Home;
    if (s == "consent") return PageKind::Consent;
    if (s == "captcha") return PageKind::Captcha;
    if (s == "dummy") return PageKind::Dummy;
    return std::nullopt;
}

/// Kinds of pages an agent may ask an engine for.
enum class RequestKind { Home, Consent, Search, Dummy };

/// The (region, agent) pair an engine sees as one traffic source. The region
/// component stands in for the shared IP block agents of one region sit
/// behind; engine throttles key on it.
struct SourceIdentity {
    std::string region;
    std::string agent_id;

    std::string throttle_key() const { return region; }
};

struct EngineRequest {
    std::string engine_id;
    RequestKind kind = RequestKind::Search;
    std::optional<SearchCategory> category; // set for Search
    std::string query;                      // intended query, set for Search
    int page_index = 0;                     // >= 1 for Search; page or section index
    SourceIdentity source;
};

struct EnginePage {
    std::string payload;        // HTML-like document
    std::string effective_query; // what the engine actually searched for
    PageKind kind = PageKind::Result;
    int page_index = 0;
    bool has_more = false; // another page/section exists past this one
    bool terminal = false; // "no more results" filler served past the end

    std::int64_t byte_size() const { return static_cast<std::int64_t>(payload.size()); }
};

/// One page sent to the collector. The manifest persists every field except
/// the payload itself.
struct PageUpload {
    std::string token;
    std::string agent_id;
    std::string region;
    std::string browser_id;
    TimeMs timestamp = 0;
    std::string engine_id;
    std::optional<SearchCategory> category; // absent for non-search pages
    std::string intended_query;
    std::string effective_query;
    int page_index = 0;
    int iteration = 0; // 0-based repetition of the query list
    PageKind kind = PageKind::Result;
    std::string payload;
};

/// Post-hoc label analytics assigns to each record.
enum class PageClass {
    Unclassified,
    EffectiveResult,
    Home,
    Consent,
    Captcha,
    Dummy,
    PostExperiment,
    UnintendedQuery,
};

inline constexpr std::string_view to_string(PageClass c)
{
    switch (c) {
    case PageClass::Unclassified: return "unclassified";
    case PageClass::EffectiveResult: return "effective_result";
    case PageClass::Home: return "home";
    case PageClass::Consent: return "consent";
    case PageClass::Captcha: return "captcha";
    case PageClass::Dummy: return "dummy";
    case PageClass::PostExperiment: return "post_experiment";
    case PageClass::UnintendedQuery: return "unintended_query";
    }
    return "unclassified";
}

/// Durable manifest entry: everything analytics needs about one page.
struct PageRecord {
    std::int64_t ingest_sequence = 0;
    std::string token;
    std::string agent_id;
    std::string region;
    std::string browser_id;
    TimeMs timestamp = 0;
    std::string engine_id;
    std::optional<SearchCategory> category;
    std::string intended_query;
    std::string effective_query;
    int page_index = 0;
    int iteration = 0;
    PageKind kind = PageKind::Result;
    std::int64_t byte_size = 0;
    std::string storage_path;
    PageClass classification = PageClass::Unclassified; // assigned by analytics
};

inline PageRecord record_from_upload(const PageUpload& u, std::int64_t sequence,
                                     std::string storage_path)
{
    PageRecord r;
    r.ingest_sequence = sequence;
    r.token = u.token;
    r.agent_id = u.agent_id;
    r.region = u.region;
    r.browser_id = u.browser_id;
    r.timestamp = u.timestamp;
    r.engine_id = u.engine_id;
    r.category = u.category;
    r.intended_query = u.intended_query;
    r.effective_query = u.effective_query;
    r.page_index = u.page_index;
    r.iteration = u.iteration;
    r.kind = u.kind;
    r.byte_size = static_cast<std::int64_t>(u.payload.size());
    r.storage_path = std::move(storage_path);
    return r;
}

} // namespace auditsim
