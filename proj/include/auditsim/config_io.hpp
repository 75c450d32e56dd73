#pragma once

#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "auditsim/design.hpp"
#include "auditsim/faults.hpp"
#include "auditsim/profiles.hpp"

namespace auditsim {

// Design and faults files are JSON documents whose field names mirror the
// in-memory structures one to one. Engines and browsers accept either a
// preset name ("google-like"), an object around a preset with overrides, or
// a fully spelled-out profile.

namespace config {

inline NavigationMode mode_from_json(const nlohmann::json& j)
{
    std::string kind = j.at("mode").get<std::string>();
    int count = j.at("count").get<int>();
    std::set<Quirk> quirks;
    if (j.contains("quirks"))
        for (const auto& q : j.at("quirks")) {
            std::string name = q.get<std::string>();
            if (name == "wait_after_scroll")
                quirks.insert(Quirk::WaitAfterScroll);
            else if (name == "push_state_url")
                quirks.insert(Quirk::PushStateUrl);
            else if (name == "redirect")
                quirks.insert(Quirk::Redirect);
            else
                throw std::invalid_argument("unknown quirk: " + name);
        }
    if (kind == "paginated")
        return paginated(count, std::move(quirks));
    if (kind == "continuous")
        return continuous(count, std::move(quirks));
    if (kind == "continuous_with_click")
        return continuous_with_click(count, std::move(quirks));
    throw std::invalid_argument("unknown navigation mode: " + kind);
}

inline nlohmann::ordered_json mode_to_json(const NavigationMode& m)
{
    nlohmann::ordered_json j;
    j["mode"] = std::string(to_string(m.kind));
    j["count"] = m.count;
    if (!m.quirks.empty()) {
        nlohmann::ordered_json quirks = nlohmann::ordered_json::array();
        for (Quirk q : m.quirks)
            quirks.push_back(std::string(to_string(q)));
        j["quirks"] = quirks;
    }
    return j;
}

inline CaptchaPolicy captcha_from_json(const nlohmann::json& j)
{
    CaptchaPolicy policy;
    policy.threshold = j.at("threshold").get<int>();
    for (const auto& cat : j.at("blocked"))
        policy.blocked_categories.insert(category_from_string(cat.get<std::string>()));
    return policy;
}

inline EncodingPolicy encoding_from_string(const std::string& s)
{
    if (s == "faithful")
        return EncodingPolicy::Faithful;
    if (s == "latin_accent_corrupting")
        return EncodingPolicy::LatinAccentCorrupting;
    throw std::invalid_argument("unknown encoding policy: " + s);
}

inline void apply_engine_fields(EngineProfile& p, const nlohmann::json& j)
{
    if (j.contains("engine_id"))
        p.engine_id = j.at("engine_id").get<std::string>();
    if (j.contains("base_url"))
        p.base_url = j.at("base_url").get<std::string>();
    if (j.contains("categories")) {
        p.per_category.clear();
        for (const auto& [name, mode] : j.at("categories").items())
            p.per_category[category_from_string(name)] = mode_from_json(mode);
        p.expected_counts.clear();
    }
    if (j.contains("expected_counts"))
        for (const auto& [name, counts] : j.at("expected_counts").items()) {
            std::set<int> set;
            for (const auto& c : counts)
                set.insert(c.get<int>());
            p.expected_counts[category_from_string(name)] = std::move(set);
        }
    // Categories without explicit expectations default to their plan count.
    for (const auto& [cat, mode] : p.per_category)
        if (p.expected_counts.find(cat) == p.expected_counts.end())
            p.expected_counts[cat] = {mode.count};
    if (j.contains("consent_banner"))
        p.consent_banner = j.at("consent_banner").get<bool>();
    if (j.contains("captcha")) {
        if (j.at("captcha").is_null())
            p.captcha_policy.reset();
        else
            p.captcha_policy = captcha_from_json(j.at("captcha"));
    }
    if (j.contains("autocorrect"))
        for (const auto& [from, to] : j.at("autocorrect").items())
            p.autocorrect_map[from] = to.get<std::string>();
    if (j.contains("encoding"))
        p.encoding_policy = encoding_from_string(j.at("encoding").get<std::string>());
}

inline EngineProfile engine_from_json(const nlohmann::json& j)
{
    if (j.is_string()) {
        auto preset = engine_preset(j.get<std::string>());
        if (!preset)
            throw std::invalid_argument("unknown engine preset: " + j.get<std::string>());
        return *preset;
    }
    EngineProfile p;
    if (j.contains("preset")) {
        auto preset = engine_preset(j.at("preset").get<std::string>());
        if (!preset)
            throw std::invalid_argument("unknown engine preset: " +
                                        j.at("preset").get<std::string>());
        p = *preset;
    }
    apply_engine_fields(p, j);
    if (p.engine_id.empty())
        throw std::invalid_argument("engine profile without engine_id");
    if (p.base_url.empty())
        p.base_url = "http://engines.local/" + p.engine_id;
    return p;
}

inline nlohmann::ordered_json engine_to_json(const EngineProfile& p)
{
    nlohmann::ordered_json j;
    j["engine_id"] = p.engine_id;
    j["base_url"] = p.base_url;
    nlohmann::ordered_json cats;
    for (SearchCategory cat : kCategoryOrder)
        if (p.has_category(cat))
            cats[std::string(to_string(cat))] = mode_to_json(p.per_category.at(cat));
    j["categories"] = cats;
    nlohmann::ordered_json expected;
    for (SearchCategory cat : kCategoryOrder) {
        auto it = p.expected_counts.find(cat);
        if (it != p.expected_counts.end())
            expected[std::string(to_string(cat))] = it->second;
    }
    j["expected_counts"] = expected;
    j["consent_banner"] = p.consent_banner;
    if (p.captcha_policy) {
        nlohmann::ordered_json captcha;
        captcha["threshold"] = p.captcha_policy->threshold;
        nlohmann::ordered_json blocked = nlohmann::ordered_json::array();
        for (SearchCategory cat : kCategoryOrder)
            if (p.captcha_policy->blocked_categories.count(cat))
                blocked.push_back(std::string(to_string(cat)));
        captcha["blocked"] = blocked;
        j["captcha"] = captcha;
    }
    if (!p.autocorrect_map.empty())
        j["autocorrect"] = p.autocorrect_map;
    if (p.encoding_policy == EncodingPolicy::LatinAccentCorrupting)
        j["encoding"] = "latin_accent_corrupting";
    return j;
}

inline BrowserProfile browser_from_json(const nlohmann::json& j)
{
    if (j.is_string()) {
        auto preset = browser_preset(j.get<std::string>());
        if (!preset)
            throw std::invalid_argument("unknown browser preset: " + j.get<std::string>());
        return *preset;
    }
    if (j.contains("preset")) {
        auto preset = browser_preset(j.at("preset").get<std::string>());
        if (!preset)
            throw std::invalid_argument("unknown browser preset: " +
                                        j.at("preset").get<std::string>());
        BrowserProfile b = *preset;
        if (j.contains("browser_id"))
            b.browser_id = j.at("browser_id").get<std::string>();
        return b;
    }
    BrowserProfile b;
    b.browser_id = j.at("browser_id").get<std::string>();
    for (const auto& t : j.at("clean_data_types"))
        b.clean_data_types.push_back(t.get<std::string>());
    return b;
}

} // namespace config

inline ExperimentDesign design_from_json(const nlohmann::json& j)
{
    ExperimentDesign d;
    d.collection_id = j.at("collection_id").get<std::string>();
    for (const auto& e : j.at("engines"))
        d.engines.push_back(config::engine_from_json(e));
    for (const auto& q : j.at("queries"))
        d.queries.push_back(q.get<std::string>());
    d.agents = j.at("agents").get<int>();
    for (const auto& r : j.at("regions"))
        d.regions.push_back(r.get<std::string>());
    for (const auto& b : j.at("browsers"))
        d.browsers.push_back(config::browser_from_json(b));
    if (j.contains("iterations"))
        d.iterations = j.at("iterations").get<int>();
    if (j.contains("cycle_seconds"))
        d.cycle_seconds = j.at("cycle_seconds").get<std::int64_t>();
    if (j.contains("routine_budget_seconds"))
        d.routine_budget_seconds = j.at("routine_budget_seconds").get<std::int64_t>();
    if (j.contains("readiness_check_seconds"))
        d.readiness_check_seconds = j.at("readiness_check_seconds").get<std::int64_t>();
    if (j.contains("max_reloads"))
        d.max_reloads = j.at("max_reloads").get<int>();
    d.start_epoch = j.at("start_epoch").get<TimeMs>();
    d.end_epoch = j.at("end_epoch").get<TimeMs>();
    return d;
}

inline nlohmann::ordered_json design_to_json(const ExperimentDesign& d)
{
    nlohmann::ordered_json j;
    j["collection_id"] = d.collection_id;
    nlohmann::ordered_json engines = nlohmann::ordered_json::array();
    for (const auto& e : d.engines)
        engines.push_back(config::engine_to_json(e));
    j["engines"] = engines;
    j["queries"] = d.queries;
    j["agents"] = d.agents;
    j["regions"] = d.regions;
    nlohmann::ordered_json browsers = nlohmann::ordered_json::array();
    for (const auto& b : d.browsers) {
        nlohmann::ordered_json bj;
        bj["browser_id"] = b.browser_id;
        bj["clean_data_types"] = b.clean_data_types;
        browsers.push_back(bj);
    }
    j["browsers"] = browsers;
    j["iterations"] = d.iterations;
    j["cycle_seconds"] = d.cycle_seconds;
    j["routine_budget_seconds"] = d.routine_budget_seconds;
    j["readiness_check_seconds"] = d.readiness_check_seconds;
    j["max_reloads"] = d.max_reloads;
    j["start_epoch"] = d.start_epoch;
    j["end_epoch"] = d.end_epoch;
    return j;
}

inline ExperimentDesign load_design_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read design file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        return design_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("ill-formed design file " + path.string() + ": " + e.what());
    }
}

inline void save_design_file(const ExperimentDesign& d, const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write design file: " + path.string());
    out << design_to_json(d).dump(2) << "\n";
}

// ---------------------------------------------------------------------------
// Faults file.
// ---------------------------------------------------------------------------

namespace config {

inline void apply_policy_fields(FaultPolicy& p, const nlohmann::json& j)
{
    if (j.contains("latency_base_ms"))
        p.latency_base_ms = j.at("latency_base_ms").get<double>();
    if (j.contains("latency_jitter_ms"))
        p.latency_jitter_ms = j.at("latency_jitter_ms").get<double>();
    if (j.contains("failure_rate"))
        p.failure_rate = j.at("failure_rate").get<double>();
    if (j.contains("stall_rate"))
        p.stall_rate = j.at("stall_rate").get<double>();
    if (j.contains("attempt_timeout_seconds"))
        p.attempt_timeout_seconds = j.at("attempt_timeout_seconds").get<std::int64_t>();
    if (p.failure_rate < 0 || p.failure_rate > 1 || p.stall_rate < 0 || p.stall_rate > 1)
        throw std::invalid_argument("fault probabilities must be within [0, 1]");
}

inline SizeSpec size_spec_from_json(const nlohmann::json& j)
{
    SizeSpec spec;
    std::string mode = j.value("mode", "deterministic");
    if (mode == "deterministic")
        spec.mode = SizeSpec::Mode::Deterministic;
    else if (mode == "noisy")
        spec.mode = SizeSpec::Mode::Noisy;
    else
        throw std::invalid_argument("unknown size model mode: " + mode);
    if (j.contains("mean_bytes"))
        spec.mean_bytes = j.at("mean_bytes").get<std::int64_t>();
    if (j.contains("sigma"))
        spec.sigma = j.at("sigma").get<double>();
    return spec;
}

} // namespace config

inline FaultsConfig faults_from_json(const nlohmann::json& j)
{
    FaultsConfig cfg;
    if (j.contains("default"))
        config::apply_policy_fields(cfg.default_policy, j.at("default"));
    if (j.contains("engines")) {
        for (const auto& [engine_id, spec] : j.at("engines").items()) {
            FaultPolicy policy = cfg.default_policy;
            config::apply_policy_fields(policy, spec);
            cfg.per_engine[engine_id] = policy;
            FaultsConfig::EngineOverride ov;
            if (spec.contains("captcha") && !spec.at("captcha").is_null())
                ov.captcha = config::captcha_from_json(spec.at("captcha"));
            if (spec.contains("autocorrect"))
                for (const auto& [from, to] : spec.at("autocorrect").items())
                    ov.autocorrect[from] = to.get<std::string>();
            if (spec.contains("encoding"))
                ov.encoding = config::encoding_from_string(spec.at("encoding").get<std::string>());
            if (ov.captcha || !ov.autocorrect.empty() || ov.encoding)
                cfg.engine_overrides[engine_id] = std::move(ov);
        }
    }
    if (j.contains("size_model")) {
        const auto& sm = j.at("size_model");
        if (sm.contains("default"))
            cfg.size_model.set_default(config::size_spec_from_json(sm.at("default")));
        if (sm.contains("overrides"))
            for (const auto& [key, spec] : sm.at("overrides").items()) {
                auto slash = key.find('/');
                if (slash == std::string::npos)
                    throw std::invalid_argument("size model override key must be engine/category: " +
                                                key);
                cfg.size_model.set_override(key.substr(0, slash),
                                            category_from_string(key.substr(slash + 1)),
                                            config::size_spec_from_json(spec));
            }
    }
    if (j.contains("collector")) {
        const auto& c = j.at("collector");
        cfg.collector.uploads_per_second = c.value("uploads_per_second", 0.0);
        cfg.collector.burst = c.value("burst", 0.0);
        cfg.collector.shed_ramp = c.value("shed_ramp", 16.0);
    }
    return cfg;
}

inline FaultsConfig load_faults_file(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot read faults file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
        return faults_from_json(j);
    } catch (const nlohmann::json::exception& e) {
        throw std::runtime_error("ill-formed faults file " + path.string() + ": " + e.what());
    }
}

} // namespace auditsim
