#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "auditsim/common.hpp"
#include "auditsim/pages.hpp"

namespace auditsim {

enum class FetchErrorReason { Transport, Timeout, Deadline };

inline constexpr std::string_view to_string(FetchErrorReason r)
{
    switch (r) {
    case FetchErrorReason::Transport: return "transport";
    case FetchErrorReason::Timeout: return "timeout";
    case FetchErrorReason::Deadline: return "deadline";
    }
    return "transport";
}

struct FetchFailure {
    FetchErrorReason reason = FetchErrorReason::Transport;
};

using FetchResult = std::variant<EnginePage, FetchFailure>;

inline bool fetch_ok(const FetchResult& r) { return std::holds_alternative<EnginePage>(r); }

/// How an agent reaches the engines: in-process against the mock fleet in
/// unit/simulated mode, over HTTP in integration mode. An attempt that would
/// complete after `deadline` is cut short and reported as a Deadline failure.
class EngineClient {
public:
    virtual ~EngineClient() = default;
    virtual FetchResult fetch(const EngineRequest& request, TimeMs deadline) = 0;
};

/// Collector acknowledgment for one upload.
struct TrackAck {
    enum class Status { Accepted, Shed, Rejected };
    Status status = Status::Accepted;
    std::int64_t ingest_sequence = 0;
    std::string reason;

    bool accepted() const { return status == Status::Accepted; }
};

struct ConfigLists {
    std::vector<std::string> engine_ids;
    std::vector<std::string> queries;
};

struct RegisterResult {
    std::optional<std::string> credentials;
    std::string error;

    bool ok() const { return credentials.has_value(); }
};

/// How an agent reaches the collector.
class TrackerClient {
public:
    virtual ~TrackerClient() = default;

    virtual RegisterResult register_agent(const std::string& token) = 0;

    /// Engine and query lists, or nullopt when the collector is unreachable
    /// or unconfigured.
    virtual std::optional<ConfigLists> get_lists() = 0;

    virtual TrackAck track(const PageUpload& upload) = 0;
};

} // namespace auditsim
