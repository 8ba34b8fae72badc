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

#include <set>

#include "housetrade/enumerate.hpp"
#include "testutil.hpp"

using namespace housetrade;

TEST(OrderedBell, MatchesKnownValues)
{
    EXPECT_EQ(ordered_bell(0), 1);
    EXPECT_EQ(ordered_bell(1), 1);
    EXPECT_EQ(ordered_bell(2), 3);
    EXPECT_EQ(ordered_bell(3), 13);
    EXPECT_EQ(ordered_bell(4), 75);
    EXPECT_EQ(ordered_bell(5), 541);
}

TEST(StrictOrders, CountsAndFirstElement)
{
    EXPECT_EQ(enum_strict_orders<HouseId>(1).size(), 1u);
    EXPECT_EQ(enum_strict_orders<HouseId>(3).size(), 6u);
    const auto orders = enum_strict_orders<HouseId>(4);
    EXPECT_EQ(orders.size(), 24u);
    EXPECT_EQ(orders.front(), testutil::houses({1, 2, 3, 4}));
    EXPECT_EQ(enum_strict_orders<HouseId>(5).size(), 120u);
    EXPECT_THROW(enum_strict_orders<HouseId>(0), std::invalid_argument);
}

TEST(WeakOrders, CountsMatchOrderedBellNumbers)
{
    for (int n = 1; n <= 5; ++n) {
        EXPECT_EQ(static_cast<std::int64_t>(enum_weak_orders<AgentId>(n).size()), ordered_bell(n));
    }
}

TEST(WeakOrders, TwoElementGroundSet)
{
    const auto orders = enum_weak_orders<AgentId>(2);
    ASSERT_EQ(orders.size(), 3u);
    EXPECT_EQ(orders[0], testutil::agent_classes({{1, 2}}));
    EXPECT_EQ(orders[1], testutil::agent_classes({{1}, {2}}));
    EXPECT_EQ(orders[2], testutil::agent_classes({{2}, {1}}));
}

TEST(WeakOrders, AllArePartitions)
{
    for (const auto& w : enum_weak_orders<AgentId>(4)) {
        EXPECT_TRUE(w.is_partition_of(4));
    }
}

TEST(Preferences, PerAgentCounts)
{
    EXPECT_EQ(enum_preferences(3, DomainKind::DlexStrict, AgentId{1}).size(), 36u);
    EXPECT_EQ(enum_preferences(3, DomainKind::SlexStrict, AgentId{1}).size(), 36u);
    EXPECT_EQ(enum_preferences(3, DomainKind::DlexWeakSupply, AgentId{1}).size(), 78u);
    EXPECT_EQ(enum_preferences(3, DomainKind::SlexWeakDemand, AgentId{1}).size(), 78u);
    EXPECT_EQ(enum_preferences(3, DomainKind::ShapleyScarfEmbedded, AgentId{1}).size(), 6u);
}

TEST(Preferences, MixedStrictDeduplicatedCounts)
{
    // Regression values: each strict supply order only matters through
    // its restriction to the other agents, and at n >= 3 no dlex
    // relation coincides with an slex relation.
    EXPECT_EQ(enum_preferences(2, DomainKind::MixedStrict, AgentId{1}).size(), 2u);
    EXPECT_EQ(enum_preferences(3, DomainKind::MixedStrict, AgentId{1}).size(), 24u);
    EXPECT_EQ(enum_preferences(3, DomainKind::MixedStrict, AgentId{2}).size(), 24u);
    EXPECT_EQ(mixed_strict_overlap(2, AgentId{1}), 2);
    EXPECT_EQ(mixed_strict_overlap(3, AgentId{1}), 0);
}

TEST(Preferences, MixedStrictRelationsArePairwiseDistinct)
{
    const AgentId agent{2};
    const auto prefs = enum_preferences(3, DomainKind::MixedStrict, agent);
    for (std::size_t i = 0; i < prefs.size(); ++i) {
        for (std::size_t j = i + 1; j < prefs.size(); ++j) {
            EXPECT_FALSE(same_relation(prefs[i], prefs[j], agent));
        }
    }
}

TEST(Preferences, GoldenIterationOrder)
{
    // golden tests and shard assignments depend on this order: strict
    // component major, weak component minor, identity first
    const auto dlex = enum_preferences(3, DomainKind::DlexStrict, AgentId{1});
    EXPECT_TRUE(dlex.front() == testutil::dlex({1, 2, 3}, {1, 2, 3}));
    EXPECT_TRUE(dlex[1] == testutil::dlex({1, 2, 3}, {1, 3, 2}));
    EXPECT_TRUE(dlex[6] == testutil::dlex({1, 3, 2}, {1, 2, 3}));
    EXPECT_TRUE(dlex.back() == testutil::dlex({3, 2, 1}, {3, 2, 1}));
    const auto slex = enum_preferences(3, DomainKind::SlexStrict, AgentId{1});
    EXPECT_TRUE(slex.front() == testutil::slex({1, 2, 3}, {1, 2, 3}));
    const auto weak = enum_preferences(2, DomainKind::DlexWeakSupply, AgentId{1});
    EXPECT_TRUE(weak.front() == LexPreference::demand_lex(testutil::houses({1, 2}),
                                                          testutil::agent_classes({{1, 2}})));
}

TEST(Preferences, NoStructuralDuplicates)
{
    for (DomainKind kind : {DomainKind::DlexStrict, DomainKind::SlexStrict, DomainKind::DlexWeakSupply,
                            DomainKind::SlexWeakDemand, DomainKind::MixedStrict,
                            DomainKind::ShapleyScarfEmbedded}) {
        const auto prefs = enum_preferences(3, kind, AgentId{1});
        for (std::size_t i = 0; i < prefs.size(); ++i) {
            for (std::size_t j = i + 1; j < prefs.size(); ++j) {
                EXPECT_FALSE(prefs[i] == prefs[j]);
            }
        }
    }
}

TEST(DomainDescriptor, DerivedCounts)
{
    const auto d = DomainDescriptor::make(3, DomainKind::DlexStrict);
    EXPECT_EQ(d.per_agent_count, 36);
    EXPECT_EQ(d.profile_count(), 46656);
    const auto e = DomainDescriptor::make(3, DomainKind::ShapleyScarfEmbedded);
    EXPECT_EQ(e.profile_count(), 216);
    const auto m = DomainDescriptor::make(3, DomainKind::MixedStrict);
    EXPECT_EQ(m.profile_count(), 24 * 24 * 24);
}

TEST(ProfileSpace, CountsAndSingleAgentCase)
{
    EXPECT_EQ(ProfileSpace(3, DomainKind::DlexStrict).count(), 46656);
    EXPECT_EQ(ProfileSpace(1, DomainKind::DlexStrict).count(), 1);
    EXPECT_EQ(ProfileSpace(1, DomainKind::MixedStrict).count(), 1);
}

TEST(ProfileSpace, IndexRoundTrip)
{
    const ProfileSpace space(3, DomainKind::DlexStrict);
    for (std::int64_t index : {std::int64_t{0}, std::int64_t{1}, std::int64_t{35}, std::int64_t{36},
                               std::int64_t{46655}, std::int64_t{12345}}) {
        EXPECT_EQ(space.index_of(space.digits(index)), index);
        EXPECT_EQ(space.find_index(space.market_at(index)), index);
    }
}

TEST(ProfileSpace, ShardsConcatenateToTheFullStream)
{
    const ProfileSpace space(2, DomainKind::DlexWeakSupply);
    std::vector<Market> full;
    for (std::int64_t i = 0; i < space.count(); ++i) {
        full.push_back(space.market_at(i));
    }
    std::vector<Market> sharded;
    const std::int64_t cut_a = space.count() / 3;
    const std::int64_t cut_b = 2 * space.count() / 3;
    for (auto [lo, hi] : {std::pair<std::int64_t, std::int64_t>{0, cut_a},
                          {cut_a, cut_b},
                          {cut_b, space.count()}}) {
        for (std::int64_t i = lo; i < hi; ++i) {
            sharded.push_back(space.market_at(i));
        }
    }
    EXPECT_EQ(full.size(), sharded.size());
    for (std::size_t i = 0; i < full.size(); ++i) {
        EXPECT_TRUE(full[i] == sharded[i]);
    }
}

TEST(Allocations, CountsOrderAndBound)
{
    EXPECT_EQ(enum_allocations(1).size(), 1u);
    const auto allocations = enum_allocations(3);
    EXPECT_EQ(allocations.size(), 6u);
    EXPECT_TRUE(allocations.front() == Allocation::endowment(3));
    EXPECT_EQ(enum_allocations(4).size(), 24u);
    EXPECT_THROW(enum_allocations(9), BoundExceededError);

    std::set<std::vector<int>> distinct;
    for (const auto& a : allocations) {
        distinct.insert(a.raw());
    }
    EXPECT_EQ(distinct.size(), allocations.size());
}

TEST(Profiles, MaterializedEnumerationRespectsBound)
{
    EXPECT_EQ(enum_profiles(1, DomainKind::SlexStrict).size(), 1u);
    EXPECT_EQ(enum_profiles(2, DomainKind::DlexStrict).size(), 16u);
    EXPECT_THROW(enum_profiles(3, DomainKind::DlexStrict, 1000), BoundExceededError);
}
