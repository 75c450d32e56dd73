#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "auditsim/engine_fleet.hpp"

using namespace auditsim;
using C = SearchCategory;
using Status = MockEngineFleet::Attempt::Status;

namespace {

EngineRequest search(const std::string& engine, C cat, const std::string& query, int page,
                     const std::string& region = "r1", const std::string& agent = "agent-000")
{
    EngineRequest req;
    req.engine_id = engine;
    req.kind = RequestKind::Search;
    req.category = cat;
    req.query = query;
    req.page_index = page;
    req.source = {region, agent};
    return req;
}

MockEngineFleet clean_fleet(std::uint64_t seed = 7)
{
    return MockEngineFleet(default_engine_fleet(), FaultsConfig{}, seed);
}

} // namespace

TEST_CASE("same request twice yields byte-identical payloads")
{
    auto fleet = clean_fleet();
    auto first = fleet.serve(search("google-like", C::Text, "climate change", 2));
    auto second = fleet.serve(search("google-like", C::Text, "climate change", 2));
    REQUIRE(first.status == Status::Ok);
    REQUIRE(second.status == Status::Ok);
    REQUIRE(first.page.payload == second.page.payload);

    // and across separately constructed fleets with the same seed
    auto other = clean_fleet();
    auto third = other.serve(search("google-like", C::Text, "climate change", 2));
    REQUIRE(third.page.payload == first.page.payload);
}

TEST_CASE("faultless engines always answer searches with result pages")
{
    auto fleet = clean_fleet();
    for (int page = 1; page <= 5; ++page) {
        auto got = fleet.serve(search("baidu-like", C::Text, "q", page));
        REQUIRE(got.status == Status::Ok);
        REQUIRE(got.page.kind == PageKind::Result);
    }
}

TEST_CASE("captcha wall rises after the per-source threshold")
{
    auto engines = default_engine_fleet();
    CaptchaPolicy policy;
    policy.threshold = 2;
    policy.blocked_categories = {C::Text, C::News};
    engines[5].captcha_policy = policy; // yandex-like
    MockEngineFleet fleet(engines, FaultsConfig{}, 7);

    // third search request from the same source hits the wall
    REQUIRE(fleet.serve(search("yandex-like", C::Text, "q1", 1)).page.kind == PageKind::Result);
    REQUIRE(fleet.serve(search("yandex-like", C::News, "q1", 1)).page.kind == PageKind::Result);
    auto third = fleet.serve(search("yandex-like", C::Text, "q2", 1));
    REQUIRE(third.page.kind == PageKind::Captcha);

    // image and video search keep working: captcha never blocks them
    REQUIRE(fleet.serve(search("yandex-like", C::Images, "q2", 1)).page.kind ==
            PageKind::Result);
    REQUIRE(fleet.serve(search("yandex-like", C::Videos, "q2", 1)).page.kind ==
            PageKind::Result);

    // a different region has its own budget
    auto elsewhere = fleet.serve(search("yandex-like", C::Text, "q1", 1, "r2", "agent-009"));
    REQUIRE(elsewhere.page.kind == PageKind::Result);

    // reset clears the counters; double reset is the same as one
    fleet.reset_throttles();
    fleet.reset_throttles();
    REQUIRE(fleet.serve(search("yandex-like", C::Text, "q1", 1)).page.kind == PageKind::Result);
}

TEST_CASE("accent-corrupting engines mangle the query deterministically")
{
    auto fleet = clean_fleet();
    auto got = fleet.serve(search("baidu-like", C::Text, "manifesta\xc3\xa7\xc3\xa3o", 1));
    REQUIRE(got.status == Status::Ok);
    REQUIRE(got.page.effective_query == "manifesta0400o");

    // faithful engines echo the query untouched
    auto faithful = fleet.serve(search("google-like", C::Text, "manifesta\xc3\xa7\xc3\xa3o", 1));
    REQUIRE(faithful.page.effective_query == "manifesta\xc3\xa7\xc3\xa3o");
}

TEST_CASE("autocorrect entries rewrite the effective query")
{
    auto engines = default_engine_fleet();
    engines[3].autocorrect_map["protesta"] = "protestant"; // google-like
    MockEngineFleet fleet(engines, FaultsConfig{}, 7);
    auto got = fleet.serve(search("google-like", C::Text, "protesta", 1));
    REQUIRE(got.page.effective_query == "protestant");
    REQUIRE(got.page.kind == PageKind::Result);
}

TEST_CASE("requests past the end get a terminal no-more-results page")
{
    auto fleet = clean_fleet();
    // google text has exactly 5 pages
    auto last = fleet.serve(search("google-like", C::Text, "q", 5));
    REQUIRE(last.page.has_more == false);
    REQUIRE(last.page.terminal == false);
    auto past = fleet.serve(search("google-like", C::Text, "q", 6));
    REQUIRE(past.page.terminal == true);
    REQUIRE(past.page.kind == PageKind::Result);
    REQUIRE(past.page.byte_size() == kTerminalPageBytes);
}

TEST_CASE("bing-like text pagination varies between 7 and 8 per query")
{
    auto fleet = clean_fleet();
    const auto& bing = fleet.profile("bing-like");
    bool saw7 = false, saw8 = false;
    for (int q = 0; q < 40 && !(saw7 && saw8); ++q) {
        int avail = fleet.available_pages(bing, C::Text, "query " + std::to_string(q));
        REQUIRE((avail == 7 || avail == 8));
        saw7 |= avail == 7;
        saw8 |= avail == 8;
    }
    REQUIRE(saw7);
    REQUIRE(saw8);
    // stable per query
    REQUIRE(fleet.available_pages(bing, C::Text, "fixed") ==
            fleet.available_pages(bing, C::Text, "fixed"));
}

TEST_CASE("deterministic size model hits the configured size exactly")
{
    FaultsConfig faults;
    SizeSpec spec;
    spec.mode = SizeSpec::Mode::Deterministic;
    spec.mean_bytes = 200 * 1024;
    faults.size_model.set_override("google-like", C::Text, spec);
    MockEngineFleet fleet(default_engine_fleet(), faults, 7);
    for (int page = 1; page <= 5; ++page) {
        auto got = fleet.serve(search("google-like", C::Text, "anything", page));
        REQUIRE(got.page.byte_size() == 200 * 1024);
    }
}

TEST_CASE("noisy size model: sample mean lands near the configured mean")
{
    FaultsConfig faults;
    SizeSpec spec;
    spec.mode = SizeSpec::Mode::Noisy;
    spec.mean_bytes = 200 * 1024;
    spec.sigma = 0.2;
    faults.size_model.set_default(spec);
    MockEngineFleet fleet(default_engine_fleet(), faults, 11);

    const int n = 1000;
    double sum = 0, sumsq = 0;
    for (int i = 0; i < n; ++i) {
        double v = static_cast<double>(
            fleet.result_page_bytes("google-like", C::Text, "query " + std::to_string(i), 1));
        sum += v;
        sumsq += v * v;
    }
    double mean = sum / n;
    double sd = std::sqrt((sumsq - n * mean * mean) / (n - 1));
    double se = sd / std::sqrt(static_cast<double>(n));
    REQUIRE(std::abs(mean - 200.0 * 1024) <= 3 * se);
}

TEST_CASE("engines configured with different means produce different means")
{
    FaultsConfig faults;
    SizeSpec big;
    big.mean_bytes = 8000;
    SizeSpec small;
    small.mean_bytes = 1000;
    faults.size_model.set_override("google-like", C::Text, big);
    faults.size_model.set_override("bing-like", C::Text, small);
    MockEngineFleet fleet(default_engine_fleet(), faults, 3);
    REQUIRE(fleet.result_page_bytes("google-like", C::Text, "q", 1) == 8000);
    REQUIRE(fleet.result_page_bytes("bing-like", C::Text, "q", 1) == 1000);
}

TEST_CASE("transport faults are deterministic per source stream")
{
    FaultsConfig faults;
    faults.default_policy.failure_rate = 0.5;
    auto run_stream = [&](std::uint64_t seed) {
        MockEngineFleet fleet(default_engine_fleet(), faults, seed);
        std::vector<Status> statuses;
        for (int i = 0; i < 32; ++i)
            statuses.push_back(
                fleet.serve(search("ddg-like", C::Text, "q", 1, "r1", "agent-003")).status);
        return statuses;
    };
    auto a = run_stream(5);
    auto b = run_stream(5);
    REQUIRE(a == b);
    bool mixed = false;
    for (auto s : a)
        if (s != a.front())
            mixed = true;
    REQUIRE(mixed); // a 50% failure rate really fails sometimes

    // another agent's stream is independent of interleaving: serving agent-003
    // and agent-004 alternately reproduces agent-003's solo stream
    MockEngineFleet fleet(default_engine_fleet(), faults, 5);
    std::vector<Status> interleaved;
    for (int i = 0; i < 32; ++i) {
        interleaved.push_back(
            fleet.serve(search("ddg-like", C::Text, "q", 1, "r1", "agent-003")).status);
        fleet.serve(search("ddg-like", C::Text, "q", 1, "r1", "agent-004"));
    }
    REQUIRE(interleaved == a);
}

TEST_CASE("home, consent and dummy requests serve their page kinds")
{
    auto fleet = clean_fleet();
    EngineRequest req;
    req.engine_id = "yahoo-like";
    req.source = {"r1", "agent-000"};
    req.kind = RequestKind::Home;
    REQUIRE(fleet.serve(req).page.kind == PageKind::Home);
    req.kind = RequestKind::Consent;
    REQUIRE(fleet.serve(req).page.kind == PageKind::Consent);
    req.kind = RequestKind::Dummy;
    REQUIRE(fleet.serve(req).page.kind == PageKind::Dummy);
}

TEST_CASE("captcha pages only ever appear on blocked categories")
{
    auto engines = default_engine_fleet();
    CaptchaPolicy policy;
    policy.threshold = 1;
    policy.blocked_categories = {C::Text};
    engines[5].captcha_policy = policy;
    MockEngineFleet fleet(engines, FaultsConfig{}, 9);
    int captchas_elsewhere = 0;
    for (int i = 0; i < 20; ++i) {
        auto images = fleet.serve(search("yandex-like", C::Images, "q", 1));
        auto videos = fleet.serve(search("yandex-like", C::Videos, "q", 1));
        captchas_elsewhere += (images.page.kind == PageKind::Captcha) +
                              (videos.page.kind == PageKind::Captcha);
    }
    REQUIRE(captchas_elsewhere == 0);
    REQUIRE(fleet.serve(search("yandex-like", C::Text, "q", 1)).page.kind == PageKind::Captcha);
}
