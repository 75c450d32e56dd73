#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "auditsim/categories.hpp"
#include "auditsim/common.hpp"
#include "auditsim/profiles.hpp"

namespace auditsim {

/// Transport-level misbehaviour of one engine. Content-level quirks
/// (captcha, autocorrection, encoding) live on the EngineProfile; these are
/// the network knobs.
struct FaultPolicy {
    double latency_base_ms = 0.0;   // every request costs at least this
    double latency_jitter_ms = 0.0; // plus uniform [0, jitter)
    double failure_rate = 0.0;      // fast transport error probability
    double stall_rate = 0.0;        // probability a request hangs to the timeout
    std::int64_t attempt_timeout_seconds = 60; // cost of a hung attempt

    bool faultless() const
    {
        return failure_rate == 0.0 && stall_rate == 0.0;
    }
};

/// Per-(engine, category) result page size behaviour.
struct SizeSpec {
    enum class Mode { Deterministic, Noisy };
    Mode mode = Mode::Deterministic;
    std::int64_t mean_bytes = 0; // 0 = use the built-in default for the pair
    double sigma = 0.2;          // log-scale spread in Noisy mode
};

class SizeModelConfig {
public:
    void set_default(SizeSpec spec) { default_ = spec; }

    void set_override(const std::string& engine_id, SearchCategory cat, SizeSpec spec)
    {
        overrides_[key(engine_id, cat)] = spec;
    }

    SizeSpec resolve(const std::string& engine_id, SearchCategory cat) const
    {
        auto it = overrides_.find(key(engine_id, cat));
        SizeSpec spec = (it != overrides_.end()) ? it->second : default_;
        if (spec.mean_bytes <= 0)
            spec.mean_bytes = builtin_mean(engine_id, cat);
        return spec;
    }

    /// Built-in deterministic means: each (engine, category) pair gets its
    /// own size so per-section averages are distinguishable in reports.
    static std::int64_t builtin_mean(const std::string& engine_id, SearchCategory cat)
    {
        static constexpr std::int64_t kCategoryBase[4] = {1800, 1400, 2600, 2200};
        std::uint64_t h = HashChain(0).feed(engine_id).digest();
        return kCategoryBase[category_index(cat)] + static_cast<std::int64_t>(h % 7) * 120;
    }

private:
    static std::string key(const std::string& engine_id, SearchCategory cat)
    {
        return engine_id + "/" + std::string(to_string(cat));
    }

    SizeSpec default_{};
    std::map<std::string, SizeSpec> overrides_;
};

/// Ingest capacity of the collector. rate 0 means unlimited. When the token
/// balance runs dry the collector starts shedding uploads probabilistically,
/// harder the deeper the deficit, which is what turns a saturated server
/// into the category-by-category coverage decay seen under overload.
struct CollectorCapacity {
    double uploads_per_second = 0.0; // 0 = unlimited
    double burst = 0.0;              // bucket size
    double shed_ramp = 16.0;         // deficit at which shedding reaches 100%
};

/// Everything a faults file can configure for one run.
struct FaultsConfig {
    FaultPolicy default_policy;
    std::map<std::string, FaultPolicy> per_engine;

    // Content quirks merged onto the named engine profiles before a run.
    struct EngineOverride {
        std::optional<CaptchaPolicy> captcha;
        std::map<std::string, std::string> autocorrect;
        std::optional<EncodingPolicy> encoding;
    };
    std::map<std::string, EngineOverride> engine_overrides;

    SizeModelConfig size_model;
    CollectorCapacity collector;

    FaultPolicy policy_for(const std::string& engine_id) const
    {
        auto it = per_engine.find(engine_id);
        return it != per_engine.end() ? it->second : default_policy;
    }
};

/// Applies the content-level overrides (captcha, autocorrect, encoding) onto
/// the engine profiles of a design. Unknown engine ids are ignored.
inline void apply_engine_overrides(std::vector<EngineProfile>& engines, const FaultsConfig& faults)
{
    for (auto& engine : engines) {
        auto it = faults.engine_overrides.find(engine.engine_id);
        if (it == faults.engine_overrides.end())
            continue;
        const auto& ov = it->second;
        if (ov.captcha)
            engine.captcha_policy = ov.captcha;
        for (const auto& [from, to] : ov.autocorrect)
            engine.autocorrect_map[from] = to;
        if (ov.encoding)
            engine.encoding_policy = *ov.encoding;
    }
}

} // namespace auditsim
