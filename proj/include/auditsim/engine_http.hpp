#pragma once

#include <atomic>
#include <chrono>
#include <memory>
#include <stdexcept>
#include <string>
#include <thread>

#include <httplib.h>

#include "auditsim/clients.hpp"
#include "auditsim/clock.hpp"
#include "auditsim/engine_fleet.hpp"

namespace auditsim {

// HTTP facade over the mock fleet:
//   GET /{engine}/                 home page
//   GET /{engine}/consent          consent page
//   GET /{engine}/search?c=&q=&p=  result page or section
// The source identity travels in X-Audit-Region / X-Audit-Agent headers (the
// stand-in for the client IP). Response metadata comes back in X-Page-Kind,
// X-Effective-Query (percent-encoded), X-Page-Index, X-Has-More, X-Terminal.
// Injected transport faults surface as 503 with an X-Fault header; a stalled
// request holds the connection for the policy's attempt timeout first.

class EngineHttpServer {
public:
    explicit EngineHttpServer(MockEngineFleet& fleet) : fleet_(fleet)
    {
        server_.Get(R"(/([A-Za-z0-9_\-]+)/search)",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        handle(req, res, RequestKind::Search);
                    });
        server_.Get(R"(/([A-Za-z0-9_\-]+)/consent)",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        handle(req, res, RequestKind::Consent);
                    });
        server_.Get(R"(/([A-Za-z0-9_\-]+)/?)",
                    [this](const httplib::Request& req, httplib::Response& res) {
                        handle(req, res, RequestKind::Home);
                    });
    }

    ~EngineHttpServer() { stop(); }

    /// Binds to `port` (0 = pick a free one) and serves until stop().
    int start(const std::string& host = "127.0.0.1", int port = 0)
    {
        if (port == 0)
            port_ = server_.bind_to_any_port(host);
        else {
            if (!server_.bind_to_port(host, port))
                throw std::runtime_error("engine server: cannot bind to port " +
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
    void handle(const httplib::Request& req, httplib::Response& res, RequestKind kind)
    {
        EngineRequest er;
        er.engine_id = req.matches[1];
        er.kind = kind;
        er.source.region = req.get_header_value("X-Audit-Region");
        er.source.agent_id = req.get_header_value("X-Audit-Agent");
        if (kind == RequestKind::Search) {
            auto cat = parse_category(req.get_param_value("c"));
            if (!cat) {
                res.status = 400;
                res.set_content("unknown category", "text/plain");
                return;
            }
            er.category = *cat;
            er.query = req.get_param_value("q");
            er.page_index = std::atoi(req.get_param_value("p").c_str());
        }

        MockEngineFleet::Attempt attempt;
        try {
            attempt = fleet_.serve(er);
        } catch (const std::invalid_argument& e) {
            res.status = 404;
            res.set_content(e.what(), "text/plain");
            return;
        }

        switch (attempt.status) {
        case MockEngineFleet::Attempt::Status::Stall:
            std::this_thread::sleep_for(
                std::chrono::milliseconds(static_cast<long long>(attempt.cost_ms)));
            res.status = 503;
            res.set_header("X-Fault", "timeout");
            return;
        case MockEngineFleet::Attempt::Status::TransportError:
            res.status = 503;
            res.set_header("X-Fault", "transport");
            return;
        case MockEngineFleet::Attempt::Status::Ok:
            break;
        }
        const EnginePage& page = attempt.page;
        res.set_header("X-Page-Kind", std::string(to_string(page.kind)));
        res.set_header("X-Effective-Query", percent_encode(page.effective_query));
        res.set_header("X-Page-Index", std::to_string(page.page_index));
        res.set_header("X-Has-More", page.has_more ? "1" : "0");
        res.set_header("X-Terminal", page.terminal ? "1" : "0");
        res.set_content(page.payload, "text/html");
    }

    MockEngineFleet& fleet_;
    httplib::Server server_;
    std::thread thread_;
    std::string host_ = "127.0.0.1";
    int port_ = 0;
};

/// EngineClient over HTTP. Network latency is whatever the wire really
/// costs; the deadline is enforced with request timeouts.
class HttpEngineClient final : public EngineClient {
public:
    HttpEngineClient(std::string base_url, Clock& clock)
        : base_url_(std::move(base_url)), clock_(clock)
    {
    }

    FetchResult fetch(const EngineRequest& request, TimeMs deadline) override
    {
        const TimeMs start = clock_.now();
        if (start >= deadline)
            return FetchFailure{FetchErrorReason::Deadline};
        const TimeMs remaining = deadline - start;

        httplib::Client cli(base_url_);
        cli.set_connection_timeout(std::chrono::milliseconds(remaining));
        cli.set_read_timeout(std::chrono::milliseconds(remaining));

        std::string path = "/" + request.engine_id + "/";
        if (request.kind == RequestKind::Consent)
            path += "consent";
        else if (request.kind == RequestKind::Search)
            path += "search?c=" + std::string(to_string(*request.category)) +
                    "&q=" + percent_encode(request.query) +
                    "&p=" + std::to_string(request.page_index);

        httplib::Headers headers = {{"X-Audit-Region", request.source.region},
                                    {"X-Audit-Agent", request.source.agent_id}};
        httplib::Result result = cli.Get(path, headers);
        if (!result) {
            if (clock_.now() >= deadline)
                return FetchFailure{FetchErrorReason::Deadline};
            return FetchFailure{result.error() == httplib::Error::Read
                                    ? FetchErrorReason::Timeout
                                    : FetchErrorReason::Transport};
        }
        if (result->status != 200) {
            if (result->get_header_value("X-Fault") == "timeout")
                return FetchFailure{FetchErrorReason::Timeout};
            return FetchFailure{FetchErrorReason::Transport};
        }
        EnginePage page;
        page.payload = result->body;
        page.kind = parse_page_kind(result->get_header_value("X-Page-Kind"))
                        .value_or(PageKind::Result);
        page.effective_query = percent_decode(result->get_header_value("X-Effective-Query"));
        page.page_index = std::atoi(result->get_header_value("X-Page-Index").c_str());
        page.has_more = result->get_header_value("X-Has-More") == "1";
        page.terminal = result->get_header_value("X-Terminal") == "1";
        return page;
    }

private:
    std::string base_url_;
    Clock& clock_;
};

} // namespace auditsim
