#include <catch2/catch_amalgamated.hpp>

#include "auditsim/plan.hpp"
#include "auditsim/profiles.hpp"

using namespace auditsim;
using C = SearchCategory;

TEST_CASE("google-like plan walks all four categories in order")
{
    auto plan = routine_plan(google_like_engine());
    REQUIRE(plan.size() == 4);
    REQUIRE(plan[0].first == C::Text);
    REQUIRE(plan[0].second == paginated(5));
    REQUIRE(plan[1].first == C::News);
    REQUIRE(plan[1].second == paginated(5));
    REQUIRE(plan[2].first == C::Images);
    REQUIRE(plan[2].second == continuous(3));
    REQUIRE(plan[3].first == C::Videos);
    REQUIRE(plan[3].second == paginated(5));
}

TEST_CASE("sogou-like plan skips the missing news category")
{
    auto plan = routine_plan(sogou_like_engine());
    REQUIRE(plan.size() == 3);
    REQUIRE(plan[0].first == C::Text);
    REQUIRE(plan[1].first == C::Images);
    REQUIRE(plan[2].first == C::Videos);
    REQUIRE(plan[2].second.quirks.count(Quirk::PushStateUrl) == 1);
}

TEST_CASE("empty profile yields an empty plan")
{
    EngineProfile p;
    p.engine_id = "hollow";
    REQUIRE(routine_plan(p).empty());
}

TEST_CASE("plan order is always a subsequence of the category order")
{
    for (const auto& profile :
         {google_like_engine(), bing_like_engine(), ddg_like_engine(), yahoo_like_engine(),
          yandex_like_engine(), baidu_like_engine(), sogou_like_engine(), so_like_engine()}) {
        auto plan = routine_plan(profile);
        int last = -1;
        for (const auto& [cat, mode] : plan) {
            (void)mode;
            REQUIRE(category_index(cat) > last);
            last = category_index(cat);
        }
    }
}

TEST_CASE("expected snapshot sets")
{
    REQUIRE(expected_snapshots(bing_like_engine(), C::Text) == std::set<int>{7, 8});
    REQUIRE(expected_snapshots(yandex_like_engine(), C::Text) == std::set<int>{1});
    REQUIRE(expected_snapshots(google_like_engine(), C::Images) == std::set<int>{3});
    REQUIRE(max_expected_snapshots(bing_like_engine(), C::Text) == 8);
}

TEST_CASE("absent category is an error")
{
    REQUIRE_THROWS_AS(expected_snapshots(sogou_like_engine(), C::News), std::out_of_range);
}
