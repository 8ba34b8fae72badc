/**
 * \file housetrade/ttc.hpp
 *
 * \brief Top trading cycles: the demand-pointing and supply-pointing
 *        algorithm variants and the TTC rule over homogeneous markets.
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

#ifndef HOUSETRADE_TTC_HPP
#define HOUSETRADE_TTC_HPP

#include <algorithm>
#include <stdexcept>
#include <utility>
#include <vector>

#include "housetrade/model.hpp"

namespace housetrade {

struct TtcStep {
    std::vector<AgentId> remaining_agents;
    std::vector<HouseId> remaining_houses;
    /// Preference-driven edges of this step's graph: agent -> top house
    /// (demand variant) or house -> top recipient (supply variant). The
    /// ownership edges are implicit (h_i <-> i).
    std::vector<std::pair<AgentId, HouseId>> agent_points;
    std::vector<std::pair<HouseId, AgentId>> house_points;
    /// Each removed cycle as its agent members, starting at the smallest.
    std::vector<std::vector<AgentId>> cycles_removed;
};

struct TtcTrace {
    std::vector<TtcStep> steps;
};

struct TtcOptions {
    bool record_trace = true;
    /// Remove all cycles present in a step at once. Cycles are
    /// node-disjoint under strict pointing, so the outcome is the same
    /// as removing one cycle per step; only the trace granularity
    /// changes.
    bool batch_removal = true;
};

namespace detail {

/// Runs the pointing loop over a functional graph succ: alive agent ->
/// alive agent and removes trading cycles until nobody is left.
/// `assign` receives each cycle agent together with its successor.
template <typename SuccFn, typename AssignFn, typename StepFn>
void run_trading_cycles(int n, const TtcOptions& opt, SuccFn succ, AssignFn assign, StepFn record_step)
{
    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    int remaining = n;
    int steps = 0;
    while (remaining > 0) {
        if (++steps > n) {
            throw std::logic_error("ttc: more steps than agents");
        }
        std::vector<int> next(static_cast<std::size_t>(n), 0);
        for (int i = 1; i <= n; ++i) {
            if (alive[static_cast<std::size_t>(i - 1)]) {
                next[static_cast<std::size_t>(i - 1)] = succ(i, alive);
            }
        }
        // Every alive node has out-degree one, so walking n hops from
        // any node lands on a cycle; a node is on a cycle iff the walk
        // returns to it in at most `remaining` further hops.
        std::vector<std::vector<int>> cycles;
        std::vector<char> on_cycle(static_cast<std::size_t>(n), 0);
        for (int start = 1; start <= n; ++start) {
            if (!alive[static_cast<std::size_t>(start - 1)] || on_cycle[static_cast<std::size_t>(start - 1)]) {
                continue;
            }
            int walker = start;
            for (int hops = 0; hops < remaining; ++hops) {
                walker = next[static_cast<std::size_t>(walker - 1)];
            }
            if (on_cycle[static_cast<std::size_t>(walker - 1)]) {
                continue;  // walked into a cycle discovered from an earlier start
            }
            std::vector<int> cycle;
            int node = walker;
            do {
                cycle.push_back(node);
                on_cycle[static_cast<std::size_t>(node - 1)] = 1;
                node = next[static_cast<std::size_t>(node - 1)];
            } while (node != walker);
            std::rotate(cycle.begin(), std::min_element(cycle.begin(), cycle.end()), cycle.end());
            cycles.push_back(std::move(cycle));
        }
        std::sort(cycles.begin(), cycles.end());
        if (!opt.batch_removal && cycles.size() > 1) {
            cycles.resize(1);
        }
        record_step(alive, next, cycles);
        for (const auto& cycle : cycles) {
            for (int agent : cycle) {
                assign(agent, next[static_cast<std::size_t>(agent - 1)]);
                alive[static_cast<std::size_t>(agent - 1)] = 0;
                --remaining;
            }
        }
    }
}

inline void collect_remaining(int n, const std::vector<char>& alive, TtcStep& step)
{
    for (int i = 1; i <= n; ++i) {
        if (alive[static_cast<std::size_t>(i - 1)]) {
            step.remaining_agents.push_back(AgentId{i});
            step.remaining_houses.push_back(HouseId{i});
        }
    }
}

}  // namespace detail

/**
 * Demand-pointing TTC over complete strict demand orders. At each step
 * every remaining agent points to his best remaining house and each
 * house points to its owner; every agent on a trading cycle receives
 * the house he points to. Terminates in at most n steps.
 */
inline std::pair<Allocation, TtcTrace> ttc_demand(const std::vector<StrictOrder<HouseId>>& demand_profile,
                                                  const TtcOptions& opt = {})
{
    const int n = static_cast<int>(demand_profile.size());
    if (n < 1) {
        throw std::invalid_argument("ttc_demand: empty profile");
    }
    std::vector<std::vector<int>> ranking(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const auto& order = demand_profile[static_cast<std::size_t>(i - 1)];
        if (!order.is_permutation_of(n)) {
            throw std::invalid_argument("ttc_demand: incomplete demand order");
        }
        for (HouseId h : order.ranking) {
            ranking[static_cast<std::size_t>(i - 1)].push_back(h.value);
        }
    }

    std::vector<int> houses(static_cast<std::size_t>(n), 0);
    TtcTrace trace;
    // Agent i's pointed house h_j is owned by agent j, so the bipartite
    // step graph collapses to the functional graph succ(i) = j.
    auto succ = [&](int agent, const std::vector<char>& alive) {
        for (int h : ranking[static_cast<std::size_t>(agent - 1)]) {
            if (alive[static_cast<std::size_t>(h - 1)]) {
                return h;
            }
        }
        throw std::logic_error("ttc_demand: agent with no remaining house");
    };
    auto assign = [&](int agent, int pointed) { houses[static_cast<std::size_t>(agent - 1)] = pointed; };
    auto record = [&](const std::vector<char>& alive, const std::vector<int>& next,
                      const std::vector<std::vector<int>>& cycles) {
        if (!opt.record_trace) {
            return;
        }
        TtcStep step;
        detail::collect_remaining(n, alive, step);
        for (int i = 1; i <= n; ++i) {
            if (alive[static_cast<std::size_t>(i - 1)]) {
                step.agent_points.emplace_back(AgentId{i}, HouseId{next[static_cast<std::size_t>(i - 1)]});
            }
        }
        for (const auto& cycle : cycles) {
            std::vector<AgentId> members;
            for (int a : cycle) {
                members.push_back(AgentId{a});
            }
            step.cycles_removed.push_back(std::move(members));
        }
        trace.steps.push_back(std::move(step));
    };
    detail::run_trading_cycles(n, opt, succ, assign, record);
    return {Allocation(std::move(houses)), std::move(trace)};
}

/**
 * Supply-pointing TTC over complete strict supply orders. At each step
 * every remaining agent points to his own house and each remaining
 * house points to the agent its owner most prefers among those left;
 * every house on a trading cycle is assigned to the agent it points to.
 */
inline std::pair<Allocation, TtcTrace> ttc_supply(const std::vector<StrictOrder<AgentId>>& supply_profile,
                                                  const TtcOptions& opt = {})
{
    const int n = static_cast<int>(supply_profile.size());
    if (n < 1) {
        throw std::invalid_argument("ttc_supply: empty profile");
    }
    std::vector<std::vector<int>> ranking(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        const auto& order = supply_profile[static_cast<std::size_t>(i - 1)];
        if (!order.is_permutation_of(n)) {
            throw std::invalid_argument("ttc_supply: incomplete supply order");
        }
        for (AgentId a : order.ranking) {
            ranking[static_cast<std::size_t>(i - 1)].push_back(a.value);
        }
    }

    std::vector<int> houses(static_cast<std::size_t>(n), 0);
    TtcTrace trace;
    // Cycle edges alternate agent i -> house h_i -> agent succ(i), where
    // succ(i) is the best remaining recipient by owner i's supply order.
    auto succ = [&](int agent, const std::vector<char>& alive) {
        for (int a : ranking[static_cast<std::size_t>(agent - 1)]) {
            if (alive[static_cast<std::size_t>(a - 1)]) {
                return a;
            }
        }
        throw std::logic_error("ttc_supply: house with no remaining recipient");
    };
    // House h_i points to succ(i); on a cycle that recipient receives h_i.
    auto assign = [&](int owner, int recipient) { houses[static_cast<std::size_t>(recipient - 1)] = owner; };
    auto record = [&](const std::vector<char>& alive, const std::vector<int>& next,
                      const std::vector<std::vector<int>>& cycles) {
        if (!opt.record_trace) {
            return;
        }
        TtcStep step;
        detail::collect_remaining(n, alive, step);
        for (int i = 1; i <= n; ++i) {
            if (alive[static_cast<std::size_t>(i - 1)]) {
                step.house_points.emplace_back(HouseId{i}, AgentId{next[static_cast<std::size_t>(i - 1)]});
            }
        }
        for (const auto& cycle : cycles) {
            std::vector<AgentId> members;
            for (int a : cycle) {
                members.push_back(AgentId{a});
            }
            step.cycles_removed.push_back(std::move(members));
        }
        trace.steps.push_back(std::move(step));
    };
    detail::run_trading_cycles(n, opt, succ, assign, record);
    return {Allocation(std::move(houses)), std::move(trace)};
}

inline std::vector<StrictOrder<HouseId>> associated_demand_profile(const Market& m)
{
    std::vector<StrictOrder<HouseId>> profile;
    profile.reserve(static_cast<std::size_t>(m.size()));
    for (int agent = 1; agent <= m.size(); ++agent) {
        profile.push_back(m.preference_raw(agent).demand_order());
    }
    return profile;
}

inline std::vector<StrictOrder<AgentId>> associated_supply_profile(const Market& m)
{
    std::vector<StrictOrder<AgentId>> profile;
    profile.reserve(static_cast<std::size_t>(m.size()));
    for (int agent = 1; agent <= m.size(); ++agent) {
        profile.push_back(m.preference_raw(agent).supply_order());
    }
    return profile;
}

/// The TTC rule: demand-pointing on all-dlex markets, supply-pointing on
/// all-slex markets. Mixed markets have no TTC rule.
inline Allocation ttc_rule(const Market& m, const TtcOptions& opt = {false, true})
{
    const auto kind = m.uniform_kind();
    if (!kind) {
        throw MixedDomainError();
    }
    if (*kind == PrefKind::DemandLex) {
        return ttc_demand(associated_demand_profile(m), opt).first;
    }
    return ttc_supply(associated_supply_profile(m), opt).first;
}

inline std::pair<Allocation, TtcTrace> ttc_rule_with_trace(const Market& m)
{
    const auto kind = m.uniform_kind();
    if (!kind) {
        throw MixedDomainError();
    }
    TtcOptions opt;
    if (*kind == PrefKind::DemandLex) {
        return ttc_demand(associated_demand_profile(m), opt);
    }
    return ttc_supply(associated_supply_profile(m), opt);
}

}  // namespace housetrade

#endif  // HOUSETRADE_TTC_HPP
