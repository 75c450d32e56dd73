#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "auditsim/clients.hpp"
#include "auditsim/common.hpp"
#include "auditsim/faults.hpp"
#include "auditsim/pages.hpp"

namespace auditsim {

// ---------------------------------------------------------------------------
// Manifest line format (one JSON object per line, field order normative):
//   ingest_sequence, token, agent_id, region, browser_id, timestamp_ms,
//   engine_id, category, kind, intended_query, effective_query, page_index,
//   iteration, byte_size, storage_path
// `category` is null for pages that belong to no search category.
// ---------------------------------------------------------------------------

inline nlohmann::ordered_json manifest_json(const PageRecord& r)
{
    nlohmann::ordered_json j;
    j["ingest_sequence"] = r.ingest_sequence;
    j["token"] = r.token;
    j["agent_id"] = r.agent_id;
    j["region"] = r.region;
    j["browser_id"] = r.browser_id;
    j["timestamp_ms"] = r.timestamp;
    j["engine_id"] = r.engine_id;
    if (r.category)
        j["category"] = to_string(*r.category);
    else
        j["category"] = nullptr;
    j["kind"] = to_string(r.kind);
    j["intended_query"] = r.intended_query;
    j["effective_query"] = r.effective_query;
    j["page_index"] = r.page_index;
    j["iteration"] = r.iteration;
    j["byte_size"] = r.byte_size;
    j["storage_path"] = r.storage_path;
    return j;
}

inline PageRecord record_from_manifest(const nlohmann::json& j)
{
    PageRecord r;
    r.ingest_sequence = j.at("ingest_sequence").get<std::int64_t>();
    r.token = j.at("token").get<std::string>();
    r.agent_id = j.at("agent_id").get<std::string>();
    r.region = j.at("region").get<std::string>();
    r.browser_id = j.at("browser_id").get<std::string>();
    r.timestamp = j.at("timestamp_ms").get<TimeMs>();
    r.engine_id = j.at("engine_id").get<std::string>();
    if (!j.at("category").is_null())
        r.category = category_from_string(j.at("category").get<std::string>());
    r.kind = parse_page_kind(j.at("kind").get<std::string>()).value_or(PageKind::Result);
    r.intended_query = j.at("intended_query").get<std::string>();
    r.effective_query = j.at("effective_query").get<std::string>();
    r.page_index = j.at("page_index").get<int>();
    r.iteration = j.at("iteration").get<int>();
    r.byte_size = j.at("byte_size").get<std::int64_t>();
    r.storage_path = j.at("storage_path").get<std::string>();
    return r;
}

/// Reads a manifest back into records; the analytics side of replay.
inline std::vector<PageRecord> load_manifest(const std::filesystem::path& manifest_path)
{
    std::ifstream in(manifest_path);
    if (!in)
        throw std::runtime_error("cannot read manifest: " + manifest_path.string());
    std::vector<PageRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        records.push_back(record_from_manifest(nlohmann::json::parse(line)));
    }
    return records;
}

/// The tracking server: registration, list distribution, durable ingestion.
///
/// Payloads land under <root>/collections/<id>/pages/<agent>/<seq>.html and
/// each acknowledged upload appends one manifest line; re-opening the same
/// root replays the manifest, so a crash after an acknowledgment never loses
/// the acknowledged record. With an empty root the collector runs purely in
/// memory (unit-test mode; no durability, same semantics otherwise).
class CollectorService {
public:
    struct Config {
        std::string collection_id = "collection";
        std::vector<std::string> engine_ids;
        std::vector<std::string> queries;
        std::vector<std::string> allowed_tokens;
        std::filesystem::path root; // empty = in-memory
        CollectorCapacity capacity;
        std::uint64_t seed = 0;
        bool sync_every_ingest = true;
    };

    explicit CollectorService(Config cfg) : cfg_(std::move(cfg))
    {
        for (const auto& t : cfg_.allowed_tokens)
            allowed_.insert(t);
        tokens_ = cfg_.capacity.burst;
        if (!cfg_.root.empty()) {
            collection_dir_ =
                cfg_.root / "collections" / std::filesystem::path(cfg_.collection_id);
            std::filesystem::create_directories(collection_dir_ / "pages");
            replay_existing_manifest();
            manifest_fd_ = ::open((collection_dir_ / "manifest.log").c_str(),
                                  O_WRONLY | O_CREAT | O_APPEND, 0644);
            if (manifest_fd_ < 0)
                throw std::runtime_error("collector: cannot open manifest.log: " +
                                         std::string(std::strerror(errno)));
        }
    }

    ~CollectorService()
    {
        if (manifest_fd_ >= 0)
            ::close(manifest_fd_);
    }

    CollectorService(const CollectorService&) = delete;
    CollectorService& operator=(const CollectorService&) = delete;

    const Config& config() const { return cfg_; }

    /// Credentials for a pre-registered token; idempotent per token.
    RegisterResult register_agent(const std::string& token)
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (allowed_.count(token) == 0)
            return {std::nullopt, "unknown token"};
        registered_.insert(token);
        return {credentials_for(token), ""};
    }

    std::optional<ConfigLists> get_lists() const
    {
        if (cfg_.engine_ids.empty() || cfg_.queries.empty())
            return std::nullopt;
        return ConfigLists{cfg_.engine_ids, cfg_.queries};
    }

    TrackAck ingest(const PageUpload& upload)
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (registered_.count(upload.token) == 0)
            return {TrackAck::Status::Rejected, 0, "credentials not registered"};
        if (upload.payload.empty())
            return {TrackAck::Status::Rejected, 0, "empty payload"};

        if (cfg_.capacity.uploads_per_second > 0 && should_shed(upload))
            return {TrackAck::Status::Shed, 0, "over capacity, retry later"};

        const std::int64_t seq = next_sequence_++;
        std::string storage_path = upload.agent_id + "/" + std::to_string(seq) + ".html";
        if (!collection_dir_.empty()) {
            if (!persist_payload(storage_path, upload.payload)) {
                --next_sequence_;
                return {TrackAck::Status::Rejected, 0, "storage failure"};
            }
        } else {
            storage_path = "mem:" + storage_path;
        }

        PageRecord record = record_from_upload(upload, seq, storage_path);
        if (manifest_fd_ >= 0) {
            std::string line = manifest_json(record).dump();
            line.push_back('\n');
            if (!write_fully(manifest_fd_, line)) {
                --next_sequence_;
                return {TrackAck::Status::Rejected, 0, "manifest append failure"};
            }
            if (cfg_.sync_every_ingest)
                ::fdatasync(manifest_fd_);
        }
        records_.push_back(std::move(record));
        return {TrackAck::Status::Accepted, seq, ""};
    }

    /// Point-in-time copy of all ingested records. Later ingests do not
    /// affect a snapshot already taken.
    std::vector<PageRecord> snapshot() const
    {
        std::lock_guard<std::mutex> lk(mu_);
        return records_;
    }

    std::size_t record_count() const
    {
        std::lock_guard<std::mutex> lk(mu_);
        return records_.size();
    }

    std::int64_t shed_count() const
    {
        std::lock_guard<std::mutex> lk(mu_);
        return shed_count_;
    }

    /// Aggregate ingest counters for the status endpoint.
    struct StatusCounts {
        std::int64_t records = 0;
        std::int64_t bytes = 0;
        std::int64_t shed = 0;
        std::map<std::string, std::int64_t> per_agent;
        std::map<std::string, std::int64_t> per_engine;
        std::map<std::string, std::int64_t> per_category;
        std::map<std::string, std::int64_t> per_kind;
    };

    StatusCounts status() const
    {
        std::lock_guard<std::mutex> lk(mu_);
        StatusCounts s;
        s.records = static_cast<std::int64_t>(records_.size());
        s.shed = shed_count_;
        for (const auto& r : records_) {
            s.bytes += r.byte_size;
            ++s.per_agent[r.agent_id];
            ++s.per_engine[r.engine_id];
            if (r.category)
                ++s.per_category[std::string(to_string(*r.category))];
            ++s.per_kind[std::string(to_string(r.kind))];
        }
        return s;
    }

    /// Abandons the open file descriptors the way a crash would: no final
    /// flush, no orderly shutdown. For durability tests.
    void simulate_crash()
    {
        std::lock_guard<std::mutex> lk(mu_);
        if (manifest_fd_ >= 0) {
            ::close(manifest_fd_);
            manifest_fd_ = -1;
        }
    }

    static std::string credentials_for(const std::string& token)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "cred-%016llx",
                      static_cast<unsigned long long>(HashChain(0x1157).feed(token).digest()));
        return buf;
    }

    std::filesystem::path collection_dir() const { return collection_dir_; }

private:
    void replay_existing_manifest()
    {
        auto manifest_path = collection_dir_ / "manifest.log";
        if (!std::filesystem::exists(manifest_path))
            return;
        std::ifstream in(manifest_path);
        std::string line;
        while (std::getline(in, line)) {
            if (line.empty())
                continue;
            records_.push_back(record_from_manifest(nlohmann::json::parse(line)));
            next_sequence_ = std::max(next_sequence_, records_.back().ingest_sequence + 1);
        }
    }

    bool persist_payload(const std::string& storage_path, const std::string& payload)
    {
        auto full = collection_dir_ / "pages" / storage_path;
        std::error_code ec;
        std::filesystem::create_directories(full.parent_path(), ec);
        int fd = ::open(full.c_str(), O_WRONLY | O_CREAT | O_TRUNC, 0644);
        if (fd < 0)
            return false;
        bool ok = write_fully(fd, payload);
        if (ok && cfg_.sync_every_ingest)
            ::fdatasync(fd);
        ::close(fd);
        return ok;
    }

    static bool write_fully(int fd, std::string_view data)
    {
        std::size_t off = 0;
        while (off < data.size()) {
            ssize_t n = ::write(fd, data.data() + off, data.size() - off);
            if (n < 0) {
                if (errno == EINTR)
                    continue;
                return false;
            }
            off += static_cast<std::size_t>(n);
        }
        return true;
    }

    // Token-bucket capacity with a probabilistic shed ramp: the deeper the
    // deficit, the more likely an upload is refused. Time advances with the
    // upload timestamps, which works identically in wall and simulated runs.
    bool should_shed(const PageUpload& upload)
    {
        const auto& cap = cfg_.capacity;
        if (upload.timestamp > last_refill_at_) {
            if (last_refill_at_ >= 0) {
                double elapsed_s =
                    static_cast<double>(upload.timestamp - last_refill_at_) / 1000.0;
                tokens_ = std::min(cap.burst, tokens_ + elapsed_s * cap.uploads_per_second);
            }
            last_refill_at_ = upload.timestamp;
        } else if (last_refill_at_ < 0) {
            last_refill_at_ = upload.timestamp;
        }
        tokens_ -= 1.0;
        if (tokens_ >= 0)
            return false;
        double p_shed = std::min(1.0, -tokens_ / std::max(cap.shed_ramp, 1e-9));
        double u = static_cast<double>(
                       mix64(HashChain(cfg_.seed).feed("shed").feed(shed_draws_++).digest()) >>
                       11) *
                   0x1.0p-53;
        if (u < p_shed) {
            ++shed_count_;
            return true;
        }
        return false;
    }

    Config cfg_;
    std::filesystem::path collection_dir_;
    int manifest_fd_ = -1;

    mutable std::mutex mu_;
    std::set<std::string> allowed_;
    std::set<std::string> registered_;
    std::vector<PageRecord> records_;
    std::int64_t next_sequence_ = 1;

    double tokens_ = 0.0;
    TimeMs last_refill_at_ = -1;
    std::uint64_t shed_draws_ = 0;
    std::int64_t shed_count_ = 0;
};

} // namespace auditsim
