#pragma once

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <vector>

#include "auditsim/common.hpp"
#include "auditsim/faults.hpp"
#include "auditsim/pages.hpp"
#include "auditsim/payload.hpp"
#include "auditsim/plan.hpp"
#include "auditsim/profiles.hpp"

namespace auditsim {

/// Autocorrection: the engine silently swaps known query terms for what it
/// thinks the user meant.
inline std::string apply_autocorrect(const EngineProfile& profile, const std::string& query)
{
    auto it = profile.autocorrect_map.find(query);
    return it != profile.autocorrect_map.end() ? it->second : query;
}

/// Accent corruption: engines that cannot handle accented Latin characters
/// degrade each non-ASCII code point into a two-digit pair.
inline std::string corrupt_latin_accents(std::string_view query)
{
    std::string out;
    out.reserve(query.size());
    std::size_t i = 0;
    while (i < query.size()) {
        char32_t cp = utf8_next(query, i);
        if (cp < 0x80) {
            out.push_back(static_cast<char>(cp));
        } else {
            unsigned digits = static_cast<unsigned>((cp ^ 0xE3u) % 100u);
            out.push_back(static_cast<char>('0' + digits / 10));
            out.push_back(static_cast<char>('0' + digits % 10));
        }
    }
    return out;
}

inline std::string effective_query_for(const EngineProfile& profile, const std::string& query)
{
    std::string eff = apply_autocorrect(profile, query);
    if (profile.encoding_policy == EncodingPolicy::LatinAccentCorrupting)
        eff = corrupt_latin_accents(eff);
    return eff;
}

// ---------------------------------------------------------------------------
// MockEngineFleet
//
// Serves the whole simulated engine fleet. Responses are pure functions of
// (seed, engine, category, query, page index); faults are pure functions of
// (seed, source identity, per-source attempt counter), so one agent's
// response stream never depends on what other agents do. Captcha throttles
// are the exception: they count per (region, engine), because the region
// models the shared IP block an engine actually sees.
// ---------------------------------------------------------------------------

class MockEngineFleet {
public:
    struct Attempt {
        enum class Status { Ok, TransportError, Stall };
        Status status = Status::Ok;
        EnginePage page;     // meaningful when status == Ok
        double cost_ms = 0;  // latency of this attempt; timeout when stalled
    };

    MockEngineFleet(std::vector<EngineProfile> engines, FaultsConfig faults, std::uint64_t seed)
        : engines_(std::move(engines)), faults_(std::move(faults)), seed_(seed)
    {
    }

    const std::vector<EngineProfile>& engines() const { return engines_; }
    std::uint64_t seed() const { return seed_; }

    const EngineProfile& profile(std::string_view engine_id) const
    {
        for (const auto& e : engines_)
            if (e.engine_id == engine_id)
                return e;
        throw std::invalid_argument("unknown engine: " + std::string(engine_id));
    }

    Attempt serve(const EngineRequest& req)
    {
        const EngineProfile& profile = this->profile(req.engine_id);
        const FaultPolicy policy = faults_.policy_for(req.engine_id);

        const Draw draw = next_draw(req.source, policy);
        if (draw.stalled)
            return {Attempt::Status::Stall, {}, static_cast<double>(
                        policy.attempt_timeout_seconds * kMillisPerSecond)};
        if (draw.failed)
            return {Attempt::Status::TransportError, {}, draw.latency_ms};

        EnginePage page;
        switch (req.kind) {
        case RequestKind::Home:
            page.kind = PageKind::Home;
            page.payload = build_service_payload(PageKind::Home, req.engine_id, kHomePageBytes);
            break;
        case RequestKind::Consent:
            page.kind = PageKind::Consent;
            page.payload =
                build_service_payload(PageKind::Consent, req.engine_id, kConsentPageBytes);
            break;
        case RequestKind::Dummy:
            page.kind = PageKind::Dummy;
            page.payload = build_service_payload(PageKind::Dummy, req.engine_id, kDummyPageBytes);
            break;
        case RequestKind::Search:
            page = serve_search(profile, req);
            break;
        }
        return {Attempt::Status::Ok, std::move(page), draw.latency_ms};
    }

    /// Clears the per-source throttle and attempt counters. Scenario runs on
    /// a shared fleet start from a clean slate after this.
    void reset_throttles()
    {
        std::lock_guard<std::mutex> lk(mu_);
        captcha_counts_.clear();
        attempt_counts_.clear();
    }

    /// Result pages available for one (engine, category, query). Engines
    /// whose acceptance set has several counts pick one per query,
    /// deterministically under the seed.
    int available_pages(const EngineProfile& profile, SearchCategory cat,
                        const std::string& query) const
    {
        const auto& counts = expected_snapshots(profile, cat);
        if (counts.size() == 1)
            return *counts.begin();
        std::uint64_t h = HashChain(seed_)
                              .feed("available")
                              .feed(profile.engine_id)
                              .feed(to_string(cat))
                              .feed(query)
                              .digest();
        auto it = counts.begin();
        std::advance(it, static_cast<long>(h % counts.size()));
        return *it;
    }

    /// Byte size of one result page. Deterministic mode returns the
    /// configured mean exactly; noisy mode draws log-normally around it.
    std::int64_t result_page_bytes(const std::string& engine_id, SearchCategory cat,
                                   const std::string& query, int page_index) const
    {
        const SizeSpec spec = faults_.size_model.resolve(engine_id, cat);
        if (spec.mode == SizeSpec::Mode::Deterministic)
            return spec.mean_bytes;
        std::uint64_t h = HashChain(seed_)
                              .feed("size")
                              .feed(engine_id)
                              .feed(to_string(cat))
                              .feed(query)
                              .feed(page_index)
                              .digest();
        double u1 = to_unit(mix64(h ^ 0x9e37u));
        double u2 = to_unit(mix64(h ^ 0x7f4au));
        while (u1 <= 0.0)
            u1 = to_unit(mix64(h ^= 0x1234567u));
        double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
        // mu chosen so the log-normal's mean equals the configured mean
        double mu = std::log(static_cast<double>(spec.mean_bytes)) - spec.sigma * spec.sigma / 2.0;
        double bytes = std::exp(mu + spec.sigma * z);
        return std::max<std::int64_t>(static_cast<std::int64_t>(std::llround(bytes)), 256);
    }

    const FaultsConfig& faults() const { return faults_; }

private:
    struct Draw {
        bool failed = false;
        bool stalled = false;
        double latency_ms = 0;
    };

    Draw next_draw(const SourceIdentity& source, const FaultPolicy& policy)
    {
        std::uint64_t n;
        {
            std::lock_guard<std::mutex> lk(mu_);
            n = attempt_counts_[source.region + "\x1f" + source.agent_id]++;
        }
        Draw draw;
        if (policy.faultless() && policy.latency_jitter_ms == 0.0) {
            draw.latency_ms = policy.latency_base_ms;
            return draw;
        }
        std::uint64_t h = HashChain(seed_)
                              .feed("attempt")
                              .feed(source.region)
                              .feed(source.agent_id)
                              .feed(n)
                              .digest();
        draw.stalled = to_unit(mix64(h ^ 2)) < policy.stall_rate;
        draw.failed = to_unit(mix64(h ^ 3)) < policy.failure_rate;
        draw.latency_ms = policy.latency_base_ms + to_unit(mix64(h ^ 5)) * policy.latency_jitter_ms;
        return draw;
    }

    EnginePage serve_search(const EngineProfile& profile, const EngineRequest& req)
    {
        if (!req.category)
            throw std::invalid_argument("search request without category");
        const SearchCategory cat = *req.category;
        if (!profile.has_category(cat))
            throw std::invalid_argument("engine '" + profile.engine_id +
                                        "' does not serve category '" +
                                        std::string(to_string(cat)) + "'");
        if (req.page_index < 1)
            throw std::invalid_argument("search request needs page_index >= 1");

        // The request reached the engine: it counts toward the per-IP budget.
        int requests_seen;
        {
            std::lock_guard<std::mutex> lk(mu_);
            requests_seen =
                ++captcha_counts_[req.source.throttle_key() + "\x1f" + profile.engine_id];
        }
        if (profile.captcha_policy && requests_seen > profile.captcha_policy->threshold &&
            profile.captcha_policy->blocked_categories.count(cat) != 0) {
            EnginePage page;
            page.kind = PageKind::Captcha;
            page.effective_query = req.query;
            page.page_index = req.page_index;
            page.payload =
                build_service_payload(PageKind::Captcha, profile.engine_id, kCaptchaPageBytes);
            return page;
        }

        EnginePage page;
        page.kind = PageKind::Result;
        page.page_index = req.page_index;
        page.effective_query = effective_query_for(profile, req.query);

        const int available = available_pages(profile, cat, req.query);
        if (req.page_index > available) {
            page.terminal = true;
            page.has_more = false;
            page.payload = build_result_payload(profile.engine_id, cat, page.effective_query,
                                                req.page_index, kTerminalPageBytes,
                                                /*terminal=*/true);
            return page;
        }
        page.has_more = req.page_index < available;
        page.payload = build_result_payload(
            profile.engine_id, cat, page.effective_query, req.page_index,
            result_page_bytes(profile.engine_id, cat, req.query, req.page_index));
        return page;
    }

    static double to_unit(std::uint64_t x) { return static_cast<double>(x >> 11) * 0x1.0p-53; }

    std::vector<EngineProfile> engines_;
    FaultsConfig faults_;
    std::uint64_t seed_;

    std::mutex mu_;
    std::map<std::string, int> captcha_counts_;          // (region, engine) -> search requests
    std::map<std::string, std::uint64_t> attempt_counts_; // (region, agent) -> attempts
};

} // namespace auditsim
