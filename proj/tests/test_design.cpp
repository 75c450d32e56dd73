#include <catch2/catch_amalgamated.hpp>

#include <algorithm>

#include "auditsim/config_io.hpp"
#include "auditsim/design.hpp"

using namespace auditsim;

namespace {

ExperimentDesign reference_design()
{
    ExperimentDesign d;
    d.collection_id = "ref";
    d.engines = default_engine_fleet();
    for (int i = 0; i < 10; ++i)
        d.queries.push_back("query " + std::to_string(i));
    d.agents = 12;
    d.regions = {"eu-central"};
    d.browsers = {chrome_like_browser(), firefox_like_browser()};
    d.start_epoch = 1'700'000'040'000;
    d.end_epoch = d.start_epoch + seconds(3600);
    return d;
}

} // namespace

TEST_CASE("reference design validates clean")
{
    auto d = reference_design();
    REQUIRE(d.cycle_seconds == 420);
    REQUIRE(d.readiness_check_seconds == 375);
    REQUIRE(d.routine_budget_seconds == 240);
    REQUIRE(validate_design(d).empty());
}

TEST_CASE("validate_design is pure and repeatable")
{
    auto d = reference_design();
    d.queries.clear();
    auto first = validate_design(d);
    auto second = validate_design(d);
    REQUIRE(first == second);
    REQUIRE_FALSE(first.empty());
}

TEST_CASE("violations carry readable reasons")
{
    auto contains = [](const std::vector<std::string>& vs, const char* needle) {
        return std::any_of(vs.begin(), vs.end(), [&](const std::string& v) {
            return v.find(needle) != std::string::npos;
        });
    };

    SECTION("empty query list")
    {
        auto d = reference_design();
        d.queries.clear();
        REQUIRE(contains(validate_design(d), "query list is empty"));
    }
    SECTION("readiness check longer than the cycle")
    {
        auto d = reference_design();
        d.readiness_check_seconds = 500;
        REQUIRE(contains(validate_design(d), "readiness check"));
    }
    SECTION("budget longer than the readiness check")
    {
        auto d = reference_design();
        d.routine_budget_seconds = 380;
        REQUIRE(contains(validate_design(d), "routine budget"));
    }
    SECTION("fewer agents than engines")
    {
        auto d = reference_design();
        d.agents = 5;
        REQUIRE(contains(validate_design(d), "below the engine count"));
    }
    SECTION("browser with a foreign cleaning list")
    {
        auto d = reference_design();
        d.browsers[0].clean_data_types.push_back("webRTC");
        REQUIRE(contains(validate_design(d), "clean_data_types"));
    }
    SECTION("captcha blocking a category that is never blocked")
    {
        auto d = reference_design();
        CaptchaPolicy policy;
        policy.threshold = 2;
        policy.blocked_categories = {SearchCategory::Images};
        d.engines[5].captcha_policy = policy;
        REQUIRE(contains(validate_design(d), "only text and news"));
    }
    SECTION("end before start")
    {
        auto d = reference_design();
        d.end_epoch = d.start_epoch;
        REQUIRE(contains(validate_design(d), "end_epoch"));
    }
    SECTION("iterations below one")
    {
        auto d = reference_design();
        d.iterations = 0;
        REQUIRE(contains(validate_design(d), "iterations"));
    }
}

TEST_CASE("table 1 cleaning lists have the documented shapes")
{
    REQUIRE(chrome_clean_data_types().size() == 13);
    REQUIRE(firefox_clean_data_types().size() == 8);
    // firefox's list is a subset of chrome's minus the chrome-only types
    for (const auto& t : firefox_clean_data_types())
        REQUIRE(std::find(chrome_clean_data_types().begin(), chrome_clean_data_types().end(),
                          t) != chrome_clean_data_types().end());
    REQUIRE(std::find(firefox_clean_data_types().begin(), firefox_clean_data_types().end(),
                      "webSQL") == firefox_clean_data_types().end());
}

TEST_CASE("roster distributes agents over region/browser cells and offsets")
{
    auto d = reference_design();
    auto roster = build_roster(d);
    REQUIRE(roster.size() == 12);

    // one agent per starting engine per (region, browser) cell
    std::map<std::pair<std::string, int>, int> per_cell;
    for (const auto& spec : roster) {
        REQUIRE(spec.start_offset >= 0);
        REQUIRE(spec.start_offset < d.engine_count());
        ++per_cell[{spec.browser_id, spec.start_offset}];
    }
    REQUIRE(per_cell.size() == 12); // 2 browsers x 6 offsets
    for (const auto& [cell, count] : per_cell) {
        (void)cell;
        REQUIRE(count == 1);
    }

    // deterministic: same design, same roster
    auto again = build_roster(d);
    for (std::size_t i = 0; i < roster.size(); ++i) {
        REQUIRE(roster[i].agent_id == again[i].agent_id);
        REQUIRE(roster[i].token == again[i].token);
    }
}

TEST_CASE("design files round-trip through JSON")
{
    auto d = reference_design();
    CaptchaPolicy policy;
    policy.threshold = 2;
    policy.blocked_categories = {SearchCategory::Text, SearchCategory::News};
    d.engines[5].captcha_policy = policy;
    d.engines[0].autocorrect_map["protesta"] = "protestant";

    auto j = design_to_json(d);
    auto back = design_from_json(j);
    REQUIRE(back.collection_id == d.collection_id);
    REQUIRE(back.engine_count() == d.engine_count());
    REQUIRE(back.queries == d.queries);
    REQUIRE(back.agents == d.agents);
    REQUIRE(back.start_epoch == d.start_epoch);
    REQUIRE(back.engines[5].captcha_policy.has_value());
    REQUIRE(back.engines[5].captcha_policy->threshold == 2);
    REQUIRE(back.engines[0].autocorrect_map.at("protesta") == "protestant");
    REQUIRE(back.engines[1].expected_counts.at(SearchCategory::Text) ==
            std::set<int>{7, 8});
    REQUIRE(validate_design(back).empty());
}

TEST_CASE("engine presets can be named in design files")
{
    nlohmann::json j = {
        {"collection_id", "mini"},
        {"engines", {"google-like", nlohmann::json{{"preset", "yandex-like"},
                                                   {"captcha",
                                                    {{"threshold", 2},
                                                     {"blocked", {"text", "news"}}}}}}},
        {"queries", {"a", "b"}},
        {"agents", 2},
        {"regions", {"r1"}},
        {"browsers", {"chrome-like"}},
        {"start_epoch", 1'700'000'040'000},
        {"end_epoch", 1'700'000'940'000},
    };
    auto d = design_from_json(j);
    REQUIRE(d.engines[0].engine_id == "google-like");
    REQUIRE(d.engines[1].engine_id == "yandex-like");
    REQUIRE(d.engines[1].captcha_policy.has_value());
    REQUIRE(d.engines[1].captcha_policy->blocked_categories ==
            std::set<SearchCategory>{SearchCategory::Text, SearchCategory::News});
    REQUIRE(validate_design(d).empty());
}
