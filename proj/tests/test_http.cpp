#include <catch2/catch_amalgamated.hpp>

#include <httplib.h>

#include "auditsim/agent.hpp"
#include "auditsim/collector_http.hpp"
#include "auditsim/engine_http.hpp"
#include "auditsim/harness.hpp"

using namespace auditsim;
using C = SearchCategory;

namespace {

constexpr TimeMs kEpoch = 1'700'000'040'000;

} // namespace

TEST_CASE("engine HTTP surface matches the in-process fleet byte for byte")
{
    MockEngineFleet fleet(default_engine_fleet(), FaultsConfig{}, 21);
    MockEngineFleet reference(default_engine_fleet(), FaultsConfig{}, 21);
    EngineHttpServer server(fleet);
    server.start();

    ManualClock clock(kEpoch);
    HttpEngineClient client(server.base_url(), clock);

    EngineRequest req;
    req.engine_id = "baidu-like";
    req.kind = RequestKind::Search;
    req.category = C::Text;
    req.query = "manifesta\xc3\xa7\xc3\xa3o";
    req.page_index = 2;
    req.source = {"r1", "agent-000"};

    auto over_http = client.fetch(req, kEpoch + seconds(60));
    REQUIRE(fetch_ok(over_http));
    const auto& page = std::get<EnginePage>(over_http);
    REQUIRE(page.kind == PageKind::Result);
    REQUIRE(page.effective_query == "manifesta0400o"); // UTF-8 survived the wire
    REQUIRE(page.page_index == 2);
    REQUIRE(page.has_more);

    auto direct = reference.serve(req);
    REQUIRE(direct.page.payload == page.payload);

    // home and consent routes
    EngineRequest home;
    home.engine_id = "google-like";
    home.kind = RequestKind::Home;
    home.source = {"r1", "agent-000"};
    auto home_page = client.fetch(home, kEpoch + seconds(60));
    REQUIRE(fetch_ok(home_page));
    REQUIRE(std::get<EnginePage>(home_page).kind == PageKind::Home);

    home.kind = RequestKind::Consent;
    auto consent_page = client.fetch(home, kEpoch + seconds(60));
    REQUIRE(std::get<EnginePage>(consent_page).kind == PageKind::Consent);

    // unknown engines are a transport-level failure
    EngineRequest bogus = home;
    bogus.engine_id = "altavista";
    auto missing = client.fetch(bogus, kEpoch + seconds(60));
    REQUIRE_FALSE(fetch_ok(missing));

    server.stop();
}

TEST_CASE("engine HTTP surface enforces the captcha budget via source headers")
{
    auto engines = default_engine_fleet();
    CaptchaPolicy policy;
    policy.threshold = 1;
    policy.blocked_categories = {C::Text};
    engines[5].captcha_policy = policy;
    MockEngineFleet fleet(engines, FaultsConfig{}, 4);
    EngineHttpServer server(fleet);
    server.start();
    ManualClock clock(kEpoch);
    HttpEngineClient client(server.base_url(), clock);

    EngineRequest req;
    req.engine_id = "yandex-like";
    req.kind = RequestKind::Search;
    req.category = C::Text;
    req.query = "q";
    req.page_index = 1;
    req.source = {"r1", "agent-000"};

    auto first = client.fetch(req, kEpoch + seconds(60));
    REQUIRE(std::get<EnginePage>(first).kind == PageKind::Result);
    auto second = client.fetch(req, kEpoch + seconds(60));
    REQUIRE(std::get<EnginePage>(second).kind == PageKind::Captcha);
    server.stop();
}

TEST_CASE("collector HTTP surface: register, lists, track, status")
{
    CollectorService::Config cfg;
    cfg.collection_id = "http";
    cfg.engine_ids = {"google-like", "ddg-like"};
    cfg.queries = {"q1", "q2"};
    cfg.allowed_tokens = {"tok-a"};
    CollectorService collector(std::move(cfg));
    CollectorHttpServer server(collector);
    server.start();

    HttpTrackerClient client(server.base_url());

    SECTION("registration")
    {
        auto ok = client.register_agent("tok-a");
        REQUIRE(ok.ok());
        REQUIRE(!ok.credentials->empty());
        auto bad = client.register_agent("nope");
        REQUIRE_FALSE(bad.ok());
    }

    SECTION("list download is byte-identical across calls")
    {
        httplib::Client raw(server.base_url());
        auto a = raw.Get("/api/config/engines");
        auto b = raw.Get("/api/config/engines");
        REQUIRE(a->status == 200);
        REQUIRE(a->body == b->body);
        auto lists = client.get_lists();
        REQUIRE(lists.has_value());
        REQUIRE(lists->engine_ids == std::vector<std::string>{"google-like", "ddg-like"});
        REQUIRE(lists->queries == std::vector<std::string>{"q1", "q2"});
    }

    SECTION("track ingests multipart uploads")
    {
        REQUIRE(client.register_agent("tok-a").ok());
        PageUpload u;
        u.token = "tok-a";
        u.agent_id = "agent-000";
        u.region = "r1";
        u.browser_id = "chrome-like";
        u.timestamp = kEpoch + 1;
        u.engine_id = "google-like";
        u.category = C::Text;
        u.intended_query = "q1";
        u.effective_query = "q1";
        u.page_index = 1;
        u.kind = PageKind::Result;
        u.payload = std::string(2048, 'p');
        auto ack = client.track(u);
        REQUIRE(ack.accepted());
        REQUIRE(ack.ingest_sequence == 1);
        REQUIRE(collector.record_count() == 1);
        REQUIRE(collector.snapshot()[0].byte_size == 2048);

        // bad credentials are rejected with nothing stored
        PageUpload stranger = u;
        stranger.token = "nope";
        REQUIRE(client.track(stranger).status == TrackAck::Status::Rejected);
        REQUIRE(collector.record_count() == 1);

        httplib::Client raw(server.base_url());
        auto status = raw.Get("/api/status");
        REQUIRE(status->status == 200);
        auto j = nlohmann::json::parse(status->body);
        REQUIRE(j.at("records").get<int>() == 1);
        REQUIRE(j.at("per_engine").at("google-like").get<int>() == 1);
    }

    server.stop();
}

TEST_CASE("a whole agent routine runs over the HTTP surfaces")
{
    ExperimentDesign design;
    design.collection_id = "http-agent";
    design.engines = {google_like_engine(), ddg_like_engine()};
    design.queries = {"q1", "q2"};
    design.agents = 2;
    design.regions = {"r1"};
    design.browsers = {chrome_like_browser()};
    design.start_epoch = kEpoch;
    design.end_epoch = kEpoch + seconds(3600);

    CollectorService collector(collector_config(design, FaultsConfig{}, 1, {}));
    CollectorHttpServer collector_server(collector);
    collector_server.start();
    MockEngineFleet fleet(design.engines, FaultsConfig{}, 1);
    EngineHttpServer engine_server(fleet);
    engine_server.start();

    // simulated clock over real HTTP: instant virtual time, real wire
    ManualClock clock(kEpoch);
    HttpEngineClient engine_client(engine_server.base_url(), clock);
    HttpTrackerClient tracker_client(collector_server.base_url());

    AgentConfig cfg;
    cfg.agent_id = "agent-000";
    cfg.region = "r1";
    cfg.browser = design.browsers[0];
    cfg.start_offset = 0;
    cfg.token = "token-agent-000";
    auto log = run_agent(cfg, design, clock, engine_client, tracker_client);

    REQUIRE_FALSE(log.aborted);
    REQUIRE(log.routines.size() == 2);
    for (const auto& routine : log.routines)
        REQUIRE(routine.all_complete());
    REQUIRE(collector.record_count() > 0);
    REQUIRE(static_cast<std::int64_t>(collector.record_count()) == log.uploads_accepted);

    engine_server.stop();
    collector_server.stop();
}
