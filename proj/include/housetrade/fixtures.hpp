/**
 * \file housetrade/fixtures.hpp
 *
 * \brief Bundled reference markets used by the `reproduce` command and
 *        the test suites: the pair-efficiency vs pairwise-stability
 *        scenario (example 1), the multi-valued strong core scenario
 *        (example 2), and the mixed-domain impossibility scenario
 *        (theorem 4) with its two deviation profiles.
 *
 * Copyright 2026 the house-trade authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef HOUSETRADE_FIXTURES_HPP
#define HOUSETRADE_FIXTURES_HPP

#include <stdexcept>
#include <vector>

#include "housetrade/model.hpp"

namespace housetrade::fixtures {

namespace detail {

template <typename T>
StrictOrder<T> order(std::vector<int> values)
{
    StrictOrder<T> o;
    o.ranking.reserve(values.size());
    for (int v : values) {
        o.ranking.push_back(T{v});
    }
    return o;
}

/// Extends a ranking over 1..3 with 4..n appended last, for the
/// padded variants of the three-agent scenarios.
inline std::vector<int> pad(std::vector<int> base, int n)
{
    for (int v = 4; v <= n; ++v) {
        base.push_back(v);
    }
    return base;
}

inline LexPreference dlex(std::vector<int> demand, std::vector<int> supply)
{
    return LexPreference::demand_lex(
        order<HouseId>(std::move(demand)),
        WeakOrder<AgentId>::from_strict(order<AgentId>(std::move(supply))));
}

inline LexPreference slex(std::vector<int> supply, std::vector<int> demand)
{
    return LexPreference::supply_lex(
        order<AgentId>(std::move(supply)),
        WeakOrder<HouseId>::from_strict(order<HouseId>(std::move(demand))));
}

/// A padding agent who finds only his own endowment acceptable: own
/// house and himself ranked first, everything else below.
inline LexPreference padding_agent(int agent, int n)
{
    std::vector<int> self_first{agent};
    for (int v = 1; v <= n; ++v) {
        if (v != agent) {
            self_first.push_back(v);
        }
    }
    return dlex(self_first, self_first);
}

}  // namespace detail

/// Three strict-dlex agents whose unique swap opportunity harms the
/// third agent: allocation (h1,h3,h2) is pair efficient yet not pairwise
/// stable. The free supply columns are pinned to the identity order.
inline Market example1()
{
    return Market(3, {
                         detail::dlex({3, 1, 2}, {1, 2, 3}),
                         detail::dlex({1, 3, 2}, {1, 2, 3}),
                         detail::dlex({2, 3, 1}, {2, 3, 1}),
                     });
}

/// Three strict-dlex agents with a genuinely multi-valued strong core:
/// both (h2,h1,h3) and (h2,h3,h1) survive every weak block. The free
/// supply column of agent 3 is pinned to the identity order.
inline Market example2()
{
    return Market(3, {
                         detail::dlex({2, 3, 1}, {3, 2, 1}),
                         detail::dlex({1, 3, 2}, {1, 3, 2}),
                         detail::dlex({2, 1, 3}, {1, 2, 3}),
                     });
}

inline std::vector<StrictOrder<HouseId>> example1_demand_profile()
{
    return {detail::order<HouseId>({3, 1, 2}), detail::order<HouseId>({1, 3, 2}),
            detail::order<HouseId>({2, 3, 1})};
}

inline std::vector<StrictOrder<HouseId>> example2_demand_profile()
{
    return {detail::order<HouseId>({2, 3, 1}), detail::order<HouseId>({1, 3, 2}),
            detail::order<HouseId>({2, 1, 3})};
}

/// Every agent top-ranks his own house (and himself); TTC stops after
/// one step of self-cycles at the endowment.
inline Market identity_market(int n)
{
    std::vector<LexPreference> prefs;
    prefs.reserve(static_cast<std::size_t>(n));
    for (int agent = 1; agent <= n; ++agent) {
        prefs.push_back(detail::padding_agent(agent, n));
    }
    return Market(n, std::move(prefs));
}

/**
 * The mixed-domain impossibility scenario: agents 1 and 2 are strict
 * dlex, agent 3 is strict slex. With individual rationality and pair
 * efficiency exactly two allocations survive, and each of the two
 * deviations below collapses the set to a different singleton, so no
 * strategy-proof selection exists. For n > 3, padding agents who accept
 * only their own endowment are appended.
 *
 * `force_dlex` retags agent 3 (and his deviation) as demand-
 * lexicographic with the same two orders, which restores possibility.
 */
inline Market theorem4_seed(int n = 3, bool force_dlex = false)
{
    if (n < 3) {
        throw std::invalid_argument("theorem4_seed: needs at least three agents");
    }
    std::vector<LexPreference> prefs;
    prefs.push_back(detail::dlex(detail::pad({2, 3, 1}, n), detail::pad({3, 2, 1}, n)));
    prefs.push_back(detail::dlex(detail::pad({3, 2, 1}, n), detail::pad({1, 3, 2}, n)));
    if (force_dlex) {
        prefs.push_back(detail::dlex(detail::pad({1, 2, 3}, n), detail::pad({1, 2, 3}, n)));
    } else {
        prefs.push_back(detail::slex(detail::pad({1, 2, 3}, n), detail::pad({1, 2, 3}, n)));
    }
    for (int agent = 4; agent <= n; ++agent) {
        prefs.push_back(detail::padding_agent(agent, n));
    }
    return Market(n, std::move(prefs));
}

/// Agent 3 reports the supply order 1 > 3 > 2 instead.
inline Market theorem4_agent3_deviation(int n = 3, bool force_dlex = false)
{
    Market m = theorem4_seed(n, force_dlex);
    if (force_dlex) {
        m.set_preference(AgentId{3}, detail::dlex(detail::pad({1, 2, 3}, n), detail::pad({1, 3, 2}, n)));
    } else {
        m.set_preference(AgentId{3}, detail::slex(detail::pad({1, 3, 2}, n), detail::pad({1, 2, 3}, n)));
    }
    return m;
}

/// Agent 1 reports the demand order h2 > h1 > h3 instead.
inline Market theorem4_agent1_deviation(int n = 3, bool force_dlex = false)
{
    Market m = theorem4_seed(n, force_dlex);
    m.set_preference(AgentId{1}, detail::dlex(detail::pad({2, 1, 3}, n), detail::pad({3, 2, 1}, n)));
    return m;
}

/// Seed plus both deviations: the minimal family on which the two
/// strategy-proofness links already rule out every rule.
inline std::vector<Market> theorem4_family(int n = 3, bool force_dlex = false)
{
    return {theorem4_seed(n, force_dlex), theorem4_agent3_deviation(n, force_dlex),
            theorem4_agent1_deviation(n, force_dlex)};
}

/// The demand-lexicographic preference of agent 2 in example 2 together
/// with the target allotment (h3, 1) is the stock richness failure.
inline LexPreference example2_agent2_preference()
{
    return detail::dlex({1, 3, 2}, {1, 3, 2});
}

/// Seed for the uniqueness probe: agents 1 and 2 top-rank each other's
/// houses with their own houses second, agent 3 keeps his own; every
/// supply order puts the owner first.
inline Market two_cycle_seed()
{
    return Market(3, {
                         detail::dlex({2, 1, 3}, {1, 2, 3}),
                         detail::dlex({1, 2, 3}, {2, 1, 3}),
                         detail::dlex({3, 1, 2}, {3, 1, 2}),
                     });
}

}  // namespace housetrade::fixtures

#endif  // HOUSETRADE_FIXTURES_HPP
