#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

#include <httplib.h>
#include <json.hpp>

#include "auditsim/clients.hpp"
#include "auditsim/collector.hpp"

namespace auditsim {

// HTTP facade over the collector:
//   POST /api/register           {"token": ...} -> {"credentials": ...}
//   GET  /api/config/engines     {"engines": [...]}   (byte-identical per call)
//   GET  /api/config/queries     {"queries": [...]}
//   POST /api/track              multipart: "meta" JSON envelope + "payload" bytes
//   GET  /api/status             ingest counters per agent/engine/category
// Track replies: 200 {"ingest_sequence": n}, 429 when shedding under
// overload ("retry later"), 403 on bad credentials, 400 on a bad envelope.

inline nlohmann::ordered_json upload_meta_json(const PageUpload& u)
{
    nlohmann::ordered_json j;
    j["token"] = u.token;
    j["agent_id"] = u.agent_id;
    j["region"] = u.region;
    j["browser_id"] = u.browser_id;
    j["timestamp_ms"] = u.timestamp;
    j["engine_id"] = u.engine_id;
    if (u.category)
        j["category"] = std::string(to_string(*u.category));
    else
        j["category"] = nullptr;
    j["intended_query"] = u.intended_query;
    j["effective_query"] = u.effective_query;
    j["page_index"] = u.page_index;
    j["iteration"] = u.iteration;
    j["kind"] = std::string(to_string(u.kind));
    return j;
}

inline PageUpload upload_from_meta_json(const nlohmann::json& j, std::string payload)
{
    PageUpload u;
    u.token = j.at("token").get<std::string>();
    u.agent_id = j.at("agent_id").get<std::string>();
    u.region = j.at("region").get<std::string>();
    u.browser_id = j.at("browser_id").get<std::string>();
    u.timestamp = j.at("timestamp_ms").get<TimeMs>();
    u.engine_id = j.at("engine_id").get<std::string>();
    if (!j.at("category").is_null())
        u.category = category_from_string(j.at("category").get<std::string>());
    u.intended_query = j.at("intended_query").get<std::string>();
    u.effective_query = j.at("effective_query").get<std::string>();
    u.page_index = j.at("page_index").get<int>();
    u.iteration = j.at("iteration").get<int>();
    u.kind = parse_page_kind(j.at("kind").get<std::string>()).value_or(PageKind::Result);
    u.payload = std::move(payload);
    return u;
}

class CollectorHttpServer {
public:
    explicit CollectorHttpServer(CollectorService& collector) : collector_(collector)
    {
        // Serialize the lists once: every GET returns the same bytes.
        if (auto lists = collector_.get_lists()) {
            engines_body_ = nlohmann::ordered_json{{"engines", lists->engine_ids}}.dump();
            queries_body_ = nlohmann::ordered_json{{"queries", lists->queries}}.dump();
        }

        server_.Post("/api/register", [this](const httplib::Request& req,
                                             httplib::Response& res) {
            try {
                auto j = nlohmann::json::parse(req.body);
                RegisterResult r = collector_.register_agent(j.at("token").get<std::string>());
                if (!r.ok()) {
                    res.status = 403;
                    res.set_content(nlohmann::ordered_json{{"error", r.error}}.dump(),
                                    "application/json");
                    return;
                }
                res.set_content(
                    nlohmann::ordered_json{{"credentials", *r.credentials}}.dump(),
                    "application/json");
            } catch (const nlohmann::json::exception& e) {
                res.status = 400;
                res.set_content(nlohmann::ordered_json{{"error", e.what()}}.dump(),
                                "application/json");
            }
        });

        server_.Get("/api/config/engines",
                    [this](const httplib::Request&, httplib::Response& res) {
                        serve_list(res, engines_body_);
                    });
        server_.Get("/api/config/queries",
                    [this](const httplib::Request&, httplib::Response& res) {
                        serve_list(res, queries_body_);
                    });

        server_.Post("/api/track", [this](const httplib::Request& req, httplib::Response& res) {
            if (!req.has_file("meta") || !req.has_file("payload")) {
                res.status = 400;
                res.set_content(nlohmann::ordered_json{{"error", "need meta and payload parts"}}
                                    .dump(),
                                "application/json");
                return;
            }
            PageUpload upload;
            try {
                upload = upload_from_meta_json(
                    nlohmann::json::parse(req.get_file_value("meta").content),
                    req.get_file_value("payload").content);
            } catch (const std::exception& e) {
                res.status = 400;
                res.set_content(nlohmann::ordered_json{{"error", e.what()}}.dump(),
                                "application/json");
                return;
            }
            TrackAck ack = collector_.ingest(upload);
            switch (ack.status) {
            case TrackAck::Status::Accepted:
                res.set_content(
                    nlohmann::ordered_json{{"ingest_sequence", ack.ingest_sequence}}.dump(),
                    "application/json");
                return;
            case TrackAck::Status::Shed:
                res.status = 429;
                res.set_header("Retry-After", "1");
                res.set_content(nlohmann::ordered_json{{"error", ack.reason}}.dump(),
                                "application/json");
                return;
            case TrackAck::Status::Rejected:
                res.status = 403;
                res.set_content(nlohmann::ordered_json{{"error", ack.reason}}.dump(),
                                "application/json");
                return;
            }
        });

        server_.Get("/api/status", [this](const httplib::Request&, httplib::Response& res) {
            auto s = collector_.status();
            nlohmann::ordered_json j;
            j["records"] = s.records;
            j["bytes"] = s.bytes;
            j["shed"] = s.shed;
            j["per_agent"] = s.per_agent;
            j["per_engine"] = s.per_engine;
            j["per_category"] = s.per_category;
            j["per_kind"] = s.per_kind;
            res.set_content(j.dump(), "application/json");
        });
    }

    ~CollectorHttpServer() { stop(); }

    int start(const std::string& host = "127.0.0.1", int port = 0)
    {
        if (port == 0)
            port_ = server_.bind_to_any_port(host);
        else {
            if (!server_.bind_to_port(host, port))
                throw std::runtime_error("collector server: cannot bind to port " +
                                         std::to_string(port));
            port_ = port;
        }
        host_ = host;
        thread_ = std::thread([this] { server_.listen_after_bind(); });
        server_.wait_until_ready();
        return port_;
    }

    void stop()
    {
        if (thread_.joinable()) {
            server_.stop();
            thread_.join();
        }
    }

    int port() const { return port_; }
    std::string base_url() const { return "http://" + host_ + ":" + std::to_string(port_); }

private:
    static void serve_list(httplib::Response& res, const std::string& body)
    {
        if (body.empty()) {
            res.status = 503;
            res.set_content(nlohmann::ordered_json{{"error", "collection not configured"}}.dump(),
                            "application/json");
            return;
        }
        res.set_content(body, "application/json");
    }

    CollectorService& collector_;
    httplib::Server server_;
    std::thread thread_;
    std::string host_ = "127.0.0.1";
    int port_ = 0;
    std::string engines_body_;
    std::string queries_body_;
};

/// TrackerClient over HTTP.
class HttpTrackerClient final : public TrackerClient {
public:
    explicit HttpTrackerClient(std::string base_url) : base_url_(std::move(base_url)) {}

    RegisterResult register_agent(const std::string& token) override
    {
        httplib::Client cli(base_url_);
        auto result = cli.Post("/api/register", nlohmann::ordered_json{{"token", token}}.dump(),
                               "application/json");
        if (!result)
            return {std::nullopt, "collector unreachable"};
        auto j = nlohmann::json::parse(result->body, nullptr, false);
        if (result->status != 200)
            return {std::nullopt, j.is_object() ? j.value("error", "rejected") : "rejected"};
        return {j.at("credentials").get<std::string>(), ""};
    }

    std::optional<ConfigLists> get_lists() override
    {
        httplib::Client cli(base_url_);
        auto engines = cli.Get("/api/config/engines");
        auto queries = cli.Get("/api/config/queries");
        if (!engines || !queries || engines->status != 200 || queries->status != 200)
            return std::nullopt;
        const auto engines_json = nlohmann::json::parse(engines->body);
        const auto queries_json = nlohmann::json::parse(queries->body);
        ConfigLists lists;
        for (const auto& e : engines_json.at("engines"))
            lists.engine_ids.push_back(e.get<std::string>());
        for (const auto& q : queries_json.at("queries"))
            lists.queries.push_back(q.get<std::string>());
        return lists;
    }

    TrackAck track(const PageUpload& upload) override
    {
        httplib::Client cli(base_url_);
        httplib::MultipartFormDataItems items = {
            {"meta", upload_meta_json(upload).dump(), "", "application/json"},
            {"payload", upload.payload, "page.html", "text/html"},
        };
        auto result = cli.Post("/api/track", items);
        if (!result)
            return {TrackAck::Status::Rejected, 0, "collector unreachable"};
        auto j = nlohmann::json::parse(result->body, nullptr, false);
        if (result->status == 200)
            return {TrackAck::Status::Accepted, j.at("ingest_sequence").get<std::int64_t>(), ""};
        if (result->status == 429)
            return {TrackAck::Status::Shed, 0,
                    j.is_object() ? j.value("error", "over capacity") : "over capacity"};
        return {TrackAck::Status::Rejected, 0,
                j.is_object() ? j.value("error", "rejected") : "rejected"};
    }

private:
    std::string base_url_;
};

} // namespace auditsim
