// Copyright 2026 the house-trade authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include "housetrade/fixtures.hpp"
#include "housetrade/market_io.hpp"
#include "testutil.hpp"

using namespace housetrade;

namespace {

const std::string kFixtures = FIXTURES_DIR;

}

TEST(MarketFiles, BundledFixturesLoadAndMatchTheProgrammaticMarkets)
{
    EXPECT_TRUE(load_market(kFixtures + "/example1.json") == fixtures::example1());
    EXPECT_TRUE(load_market(kFixtures + "/example2.json") == fixtures::example2());
    EXPECT_TRUE(load_market(kFixtures + "/theorem4.json") == fixtures::theorem4_seed());
    EXPECT_TRUE(load_market(kFixtures + "/example2_embedded.json") ==
                embed_shapley_scarf(fixtures::example2_demand_profile()));
    EXPECT_TRUE(load_market(kFixtures + "/identity.json") == fixtures::identity_market(3));
}

TEST(MarketFiles, RoundTripOverTheMixedStrictDomain)
{
    const ProfileSpace space(3, DomainKind::MixedStrict);
    for (std::int64_t index = 0; index < space.count(); ++index) {
        const Market m = space.market_at(index);
        ASSERT_TRUE(parse_market(market_to_json(m)) == m) << "profile " << index;
    }
}

TEST(MarketFiles, RoundTripOverTheFullStrictDomains)
{
    for (DomainKind kind : {DomainKind::DlexStrict, DomainKind::SlexStrict}) {
        const ProfileSpace space(3, kind);
        for (std::int64_t index = 0; index < space.count(); ++index) {
            const Market m = space.market_at(index);
            ASSERT_TRUE(parse_market(market_to_json(m)) == m) << "profile " << index;
        }
    }
}

TEST(MarketFiles, RoundTripOverTheWeakComponentDomains)
{
    for (DomainKind kind : {DomainKind::DlexWeakSupply, DomainKind::SlexWeakDemand}) {
        const ProfileSpace space(2, kind);
        for (std::int64_t index = 0; index < space.count(); ++index) {
            const Market m = space.market_at(index);
            ASSERT_TRUE(parse_market(market_to_json(m)) == m);
        }
    }
    const ProfileSpace embedded(3, DomainKind::ShapleyScarfEmbedded);
    for (std::int64_t index = 0; index < embedded.count(); ++index) {
        const Market m = embedded.market_at(index);
        ASSERT_TRUE(parse_market(market_to_json(m)) == m);
    }
}

TEST(MarketFiles, WeakClassesAreCanonicalizedOnParse)
{
    const auto doc = json::parse(R"({
      "n": 3,
      "preferences": [
        { "agent": 1, "kind": "dlex", "demand": ["h2","h3","h1"], "supply": [[3,1],[2]] },
        { "agent": 2, "kind": "dlex", "demand": ["h2","h3","h1"], "supply": [[1,3],[2]] },
        { "agent": 3, "kind": "slex", "supply": [1,2,3], "demand": [["h3","h1"],["h2"]] }
      ]
    })");
    const Market m = parse_market(doc);
    EXPECT_TRUE(m.preference_raw(1) == m.preference_raw(2));
    EXPECT_EQ(m.preference_raw(3).weak_component().front(), (std::vector<int>{1, 3}));
}

TEST(MarketFiles, ParseErrors)
{
    EXPECT_THROW(parse_market(json::parse(R"({"preferences": []})")), MarketParseError);
    EXPECT_THROW(parse_market(json::parse(R"({"n": 2, "preferences": []})")), MarketParseError);
    EXPECT_THROW(parse_market(json::parse(R"({"n": 1, "preferences": [
        {"agent": 1, "kind": "quadratic", "demand": ["h1"], "supply": [[1]]}]})")),
                 MarketParseError);
    EXPECT_THROW(parse_market(json::parse(R"({"n": 1, "preferences": [
        {"agent": 1, "kind": "dlex", "demand": ["x1"], "supply": [[1]]}]})")),
                 MarketParseError);
    EXPECT_THROW(parse_market(json::parse(R"({"n": 2, "preferences": [
        {"agent": 1, "kind": "dlex", "demand": ["h1","h2"], "supply": [[1],[2]]},
        {"agent": 1, "kind": "dlex", "demand": ["h1","h2"], "supply": [[1],[2]]}]})")),
                 MarketParseError);
    // structurally fine but semantically invalid: missing house in the demand order
    EXPECT_THROW(parse_market(json::parse(R"({"n": 2, "preferences": [
        {"agent": 1, "kind": "dlex", "demand": ["h1","h1"], "supply": [[1],[2]]},
        {"agent": 2, "kind": "dlex", "demand": ["h1","h2"], "supply": [[1],[2]]}]})")),
                 MarketParseError);
    EXPECT_THROW(load_market("/nonexistent/market.json"), MarketParseError);
}

TEST(Allocations, ParseAndSerializeHouseNameVectors)
{
    const Allocation a = parse_allocation("h2, h1 ,h3", 3);
    EXPECT_TRUE(a == testutil::alloc({2, 1, 3}));
    EXPECT_EQ(allocation_to_json(a), json::parse(R"(["h2","h1","h3"])"));
    EXPECT_THROW(parse_allocation("h2,h1", 3), MarketParseError);
    EXPECT_THROW(parse_allocation("h2,h1,h1", 3), MarketParseError);
    EXPECT_THROW(parse_allocation("h2,h1,h9", 3), MarketParseError);
    EXPECT_THROW(parse_allocation("h2,house1,h3", 3), MarketParseError);
}

TEST(Reports, PropertyReportCarriesWitnesses)
{
    const auto report = is_pairwise_stable(fixtures::example1(), testutil::alloc({1, 3, 2}));
    const json j = property_report_to_json(report);
    EXPECT_EQ(j["property"], "pairwise");
    EXPECT_EQ(j["holds"], false);
    EXPECT_EQ(j["witness"]["agents"], json::parse("[1,2]"));
    EXPECT_EQ(j["witness"]["allocation"], json::parse(R"(["h3","h1","h2"])"));
}

TEST(Reports, TraceSerializationListsStepsAndCycles)
{
    const auto [allocation, trace] = ttc_rule_with_trace(fixtures::example2());
    const json j = trace_to_json(trace);
    ASSERT_EQ(j["steps"].size(), 2u);
    EXPECT_EQ(j["steps"][0]["agents"], json::parse("[1,2,3]"));
    EXPECT_EQ(j["steps"][0]["cycles_removed"], json::parse("[[1,2]]"));
    EXPECT_EQ(j["steps"][1]["cycles_removed"], json::parse("[[3]]"));
}

TEST(Reports, StableKeyOrderAcrossRuns)
{
    const auto report = audit_strategy_proofness(make_ttc_rule(), 2, DomainKind::DlexStrict);
    EXPECT_EQ(audit_report_to_json(report).dump(2), audit_report_to_json(report).dump(2));
    const json j = audit_report_to_json(report);
    auto it = j.begin();
    EXPECT_EQ(it.key(), "audit");
    ++it;
    EXPECT_EQ(it.key(), "rule");
    ++it;
    EXPECT_EQ(it.key(), "domain");
}
