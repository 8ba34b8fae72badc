/**
 * \file housetrade/verify.hpp
 *
 * \brief Brute-force allocation-property checkers (individual
 *        rationality, Pareto and pair efficiency, stability, pairwise
 *        stability, strong-core membership), exact strong-core and
 *        stable-set enumeration, and the domain-richness search.
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

#ifndef HOUSETRADE_VERIFY_HPP
#define HOUSETRADE_VERIFY_HPP

#include <algorithm>
#include <bit>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "housetrade/enumerate.hpp"
#include "housetrade/model.hpp"

namespace housetrade {

struct BruteForceBounds {
    int per_allocation = 8;  ///< single-allocation checkers (Pareto, stability, core membership)
    int set_enumeration = 5; ///< full-set enumerators (strong core, stable set)
};

enum class AllocationProperty {
    IndividualRationality,
    ParetoEfficiency,
    PairEfficiency,
    Stability,
    PairwiseStability,
    StrongCore,
};

inline const char* to_string(AllocationProperty p)
{
    switch (p) {
        case AllocationProperty::IndividualRationality: return "ir";
        case AllocationProperty::ParetoEfficiency: return "pareto";
        case AllocationProperty::PairEfficiency: return "pair";
        case AllocationProperty::Stability: return "stable";
        case AllocationProperty::PairwiseStability: return "pairwise";
        case AllocationProperty::StrongCore: return "core";
    }
    return "?";
}

struct PropertyWitness {
    /// Violating agent, swapping pair, or blocking coalition.
    std::vector<AgentId> agents;
    /// The allocation certifying the violation (blocking, dominating, or
    /// swapped allocation; the endowment for individual rationality).
    std::optional<Allocation> alternative;
};

struct PropertyReport {
    AllocationProperty property;
    bool holds = false;
    std::optional<PropertyWitness> witness;
};

namespace detail {

inline void check_sizes(const Market& m, const Allocation& a)
{
    if (a.size() != m.size()) {
        throw std::invalid_argument("allocation and market sizes differ");
    }
}

inline Allotment allotment_raw(const Allocation& a, int agent)
{
    return Allotment{HouseId{a.house_of_raw(agent)}, AgentId{a.agent_of_raw(agent)}};
}

/// Coalitions in minimal-first order: by size, then lexicographically by
/// their sorted member lists.
inline std::vector<std::vector<int>> coalitions_minimal_first(int n)
{
    std::vector<std::vector<int>> out;
    for (int size = 1; size <= n; ++size) {
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            if (std::popcount(mask) != size) {
                continue;
            }
            std::vector<int> members;
            for (int i = 1; i <= n; ++i) {
                if (mask & (1u << (i - 1))) {
                    members.push_back(i);
                }
            }
            out.push_back(std::move(members));
        }
    }
    return out;
}

/// b obtained from a by agents i and j swapping their assigned houses.
inline Allocation swap_houses(const Allocation& a, int i, int j)
{
    std::vector<int> v = a.raw();
    std::swap(v[static_cast<std::size_t>(i - 1)], v[static_cast<std::size_t>(j - 1)]);
    return Allocation(std::move(v));
}

/// b Pareto dominates a: everybody weakly better off, somebody strictly.
inline bool pareto_dominates(const Market& m, const Allocation& b, const Allocation& a)
{
    bool someone_strict = false;
    for (int agent = 1; agent <= m.size(); ++agent) {
        const Allotment at_b = allotment_raw(b, agent);
        const Allotment at_a = allotment_raw(a, agent);
        const auto cmp = compare_raw(m.preference_raw(agent), at_b.house.value, at_b.recipient.value,
                                     at_a.house.value, at_a.recipient.value);
        if (cmp == std::weak_ordering::less) {
            return false;
        }
        if (cmp == std::weak_ordering::greater) {
            someone_strict = true;
        }
    }
    return someone_strict;
}

}  // namespace detail

/// b Pareto dominates a: every agent weakly better off, at least one strictly.
inline bool pareto_dominates(const Market& m, const Allocation& b, const Allocation& a)
{
    detail::check_sizes(m, a);
    detail::check_sizes(m, b);
    return detail::pareto_dominates(m, b, a);
}

/**
 * Whether coalition S weakly blocks a through b: at b the members of S
 * reallocate their endowments among themselves, every member is weakly
 * better off than at a, and at least one member strictly. Members'
 * allotments depend only on b restricted to S, because b(S) = h(S)
 * keeps the members' endowments circulating inside the coalition; the
 * enumerating callers therefore only vary b on S.
 */
inline bool weakly_blocks(const Market& m, const Allocation& a,
                          const std::vector<AgentId>& coalition, const Allocation& b)
{
    detail::check_sizes(m, a);
    detail::check_sizes(m, b);
    std::vector<char> in_coalition(static_cast<std::size_t>(m.size()), 0);
    for (AgentId i : coalition) {
        in_coalition[static_cast<std::size_t>(i.value - 1)] = 1;
    }
    for (AgentId i : coalition) {
        const int received = b.house_of_raw(i.value);
        if (!in_coalition[static_cast<std::size_t>(received - 1)]) {
            throw std::invalid_argument("weakly_blocks: b does not reallocate the coalition's endowments");
        }
    }
    bool someone_strict = false;
    for (AgentId i : coalition) {
        const Allotment at_b = detail::allotment_raw(b, i.value);
        const Allotment at_a = detail::allotment_raw(a, i.value);
        const auto cmp = compare_raw(m.preference_raw(i.value), at_b.house.value, at_b.recipient.value,
                                     at_a.house.value, at_a.recipient.value);
        if (cmp == std::weak_ordering::less) {
            return false;
        }
        if (cmp == std::weak_ordering::greater) {
            someone_strict = true;
        }
    }
    return someone_strict;
}

namespace detail {

/// Searches for a weakly blocking (S, b); the witness allocation keeps
/// every non-member at his endowment. Coalitions minimal-first,
/// bijections in lexicographic order, so witnesses are deterministic.
inline std::optional<PropertyWitness> find_weak_block(const Market& m, const Allocation& a)
{
    const int n = m.size();
    for (const auto& members : coalitions_minimal_first(n)) {
        std::vector<int> houses = members;  // h(S): endowment houses of S, ascending
        std::sort(houses.begin(), houses.end());
        do {
            std::vector<int> v(static_cast<std::size_t>(n));
            for (int agent = 1; agent <= n; ++agent) {
                v[static_cast<std::size_t>(agent - 1)] = agent;
            }
            for (std::size_t k = 0; k < members.size(); ++k) {
                v[static_cast<std::size_t>(members[k] - 1)] = houses[k];
            }
            Allocation b(std::move(v));
            bool someone_strict = false;
            bool all_weak = true;
            for (int i : members) {
                const Allotment at_b = allotment_raw(b, i);
                const Allotment at_a = allotment_raw(a, i);
                const auto cmp = compare_raw(m.preference_raw(i), at_b.house.value, at_b.recipient.value,
                                             at_a.house.value, at_a.recipient.value);
                if (cmp == std::weak_ordering::less) {
                    all_weak = false;
                    break;
                }
                if (cmp == std::weak_ordering::greater) {
                    someone_strict = true;
                }
            }
            if (all_weak && someone_strict) {
                PropertyWitness w;
                for (int i : members) {
                    w.agents.push_back(AgentId{i});
                }
                w.alternative = std::move(b);
                return w;
            }
        } while (std::next_permutation(houses.begin(), houses.end()));
    }
    return std::nullopt;
}

}  // namespace detail

/// No agent prefers his endowment allotment to his allotment at a.
inline PropertyReport is_individually_rational(const Market& m, const Allocation& a)
{
    detail::check_sizes(m, a);
    PropertyReport report{AllocationProperty::IndividualRationality, true, std::nullopt};
    for (int agent = 1; agent <= m.size(); ++agent) {
        const Allotment at_a = detail::allotment_raw(a, agent);
        const auto cmp = compare_raw(m.preference_raw(agent), at_a.house.value, at_a.recipient.value,
                                     agent, agent);
        if (cmp == std::weak_ordering::less) {
            report.holds = false;
            report.witness = PropertyWitness{{AgentId{agent}}, Allocation::endowment(m.size())};
            break;
        }
    }
    return report;
}

/// No allocation among all n! makes everybody weakly better off and
/// somebody strictly better off.
inline PropertyReport is_pareto_efficient(const Market& m, const Allocation& a, int bound = 8)
{
    detail::check_sizes(m, a);
    if (m.size() > bound) {
        throw BoundExceededError("is_pareto_efficient: market size exceeds the brute-force bound");
    }
    PropertyReport report{AllocationProperty::ParetoEfficiency, true, std::nullopt};
    for (const Allocation& b : enum_allocations(m.size(), bound)) {
        if (b == a) {
            continue;
        }
        if (detail::pareto_dominates(m, b, a)) {
            PropertyWitness w;
            for (int agent = 1; agent <= m.size(); ++agent) {
                const Allotment at_b = detail::allotment_raw(b, agent);
                const Allotment at_a = detail::allotment_raw(a, agent);
                if (compare_raw(m.preference_raw(agent), at_b.house.value, at_b.recipient.value,
                                at_a.house.value, at_a.recipient.value) == std::weak_ordering::greater) {
                    w.agents.push_back(AgentId{agent});
                }
            }
            w.alternative = b;
            report.holds = false;
            report.witness = std::move(w);
            break;
        }
    }
    return report;
}

/// No pair can swap assigned houses so that both gain strictly and the
/// swap Pareto dominates a (everyone else weakly better off too).
inline PropertyReport is_pair_efficient(const Market& m, const Allocation& a)
{
    detail::check_sizes(m, a);
    PropertyReport report{AllocationProperty::PairEfficiency, true, std::nullopt};
    for (int i = 1; i <= m.size() && report.holds; ++i) {
        for (int j = i + 1; j <= m.size(); ++j) {
            Allocation b = detail::swap_houses(a, i, j);
            bool both_strict = true;
            for (int agent : {i, j}) {
                const Allotment at_b = detail::allotment_raw(b, agent);
                const Allotment at_a = detail::allotment_raw(a, agent);
                if (compare_raw(m.preference_raw(agent), at_b.house.value, at_b.recipient.value,
                                at_a.house.value, at_a.recipient.value) != std::weak_ordering::greater) {
                    both_strict = false;
                    break;
                }
            }
            if (both_strict && detail::pareto_dominates(m, b, a)) {
                report.holds = false;
                report.witness = PropertyWitness{{AgentId{i}, AgentId{j}}, std::move(b)};
                break;
            }
        }
    }
    return report;
}

/// No pair can swap assigned houses so that both gain strictly.
inline PropertyReport is_pairwise_stable(const Market& m, const Allocation& a)
{
    detail::check_sizes(m, a);
    PropertyReport report{AllocationProperty::PairwiseStability, true, std::nullopt};
    for (int i = 1; i <= m.size() && report.holds; ++i) {
        for (int j = i + 1; j <= m.size(); ++j) {
            Allocation b = detail::swap_houses(a, i, j);
            bool both_strict = true;
            for (int agent : {i, j}) {
                const Allotment at_b = detail::allotment_raw(b, agent);
                const Allotment at_a = detail::allotment_raw(a, agent);
                if (compare_raw(m.preference_raw(agent), at_b.house.value, at_b.recipient.value,
                                at_a.house.value, at_a.recipient.value) != std::weak_ordering::greater) {
                    both_strict = false;
                    break;
                }
            }
            if (both_strict) {
                report.holds = false;
                report.witness = PropertyWitness{{AgentId{i}, AgentId{j}}, std::move(b)};
                break;
            }
        }
    }
    return report;
}

/// No coalition can reallocate the houses its members obtained at a,
/// everybody else fixed, so that every member is strictly better off.
inline PropertyReport is_stable(const Market& m, const Allocation& a, int bound = 8)
{
    detail::check_sizes(m, a);
    if (m.size() > bound) {
        throw BoundExceededError("is_stable: market size exceeds the brute-force bound");
    }
    PropertyReport report{AllocationProperty::Stability, true, std::nullopt};
    for (const auto& members : detail::coalitions_minimal_first(m.size())) {
        std::vector<int> received;
        received.reserve(members.size());
        for (int i : members) {
            received.push_back(a.house_of_raw(i));
        }
        std::sort(received.begin(), received.end());
        do {
            std::vector<int> v = a.raw();
            for (std::size_t k = 0; k < members.size(); ++k) {
                v[static_cast<std::size_t>(members[k] - 1)] = received[k];
            }
            Allocation b(std::move(v));
            bool all_strict = true;
            for (int i : members) {
                const Allotment at_b = detail::allotment_raw(b, i);
                const Allotment at_a = detail::allotment_raw(a, i);
                if (compare_raw(m.preference_raw(i), at_b.house.value, at_b.recipient.value,
                                at_a.house.value, at_a.recipient.value) != std::weak_ordering::greater) {
                    all_strict = false;
                    break;
                }
            }
            if (all_strict) {
                PropertyWitness w;
                for (int i : members) {
                    w.agents.push_back(AgentId{i});
                }
                w.alternative = std::move(b);
                report.holds = false;
                report.witness = std::move(w);
                return report;
            }
        } while (std::next_permutation(received.begin(), received.end()));
    }
    return report;
}

/// Membership check: a is in the strong core iff no coalition weakly
/// blocks it by reallocating its endowments.
inline PropertyReport in_strong_core(const Market& m, const Allocation& a, int bound = 8)
{
    detail::check_sizes(m, a);
    if (m.size() > bound) {
        throw BoundExceededError("in_strong_core: market size exceeds the brute-force bound");
    }
    PropertyReport report{AllocationProperty::StrongCore, true, std::nullopt};
    if (auto w = detail::find_weak_block(m, a)) {
        report.holds = false;
        report.witness = std::move(w);
    }
    return report;
}

/// Exact strong core by exhaustive enumeration, canonically sorted.
inline std::vector<Allocation> strong_core(const Market& m, int bound = 5)
{
    if (m.size() > bound) {
        throw BoundExceededError("strong_core: market size exceeds the set-enumeration bound");
    }
    std::vector<Allocation> out;
    for (const Allocation& a : enum_allocations(m.size(), bound)) {
        if (!detail::find_weak_block(m, a)) {
            out.push_back(a);
        }
    }
    return out;
}

/// All stable allocations, canonically sorted.
inline std::vector<Allocation> stable_set(const Market& m, int bound = 5)
{
    if (m.size() > bound) {
        throw BoundExceededError("stable_set: market size exceeds the set-enumeration bound");
    }
    std::vector<Allocation> out;
    for (const Allocation& a : enum_allocations(m.size(), bound)) {
        if (is_stable(m, a, bound).holds) {
            out.push_back(a);
        }
    }
    return out;
}

struct RichnessResult {
    bool satisfiable = false;
    std::optional<LexPreference> witness;
};

/**
 * Searches the strict-supply dlex preferences of the same agent for one
 * that preserves the weak upper and lower contour sets at `target` and
 * ranks the endowment allotment immediately below `target`. An
 * Unsatisfiable outcome exhibits a failure of the contour-preserving
 * richness condition on this domain.
 */
inline RichnessResult richness_counterexample(const LexPreference& pref, AgentId owner, Allotment target)
{
    const int n = pref.size();
    if (pref.kind() != PrefKind::DemandLex) {
        throw std::invalid_argument("richness_counterexample: preference must be demand-lexicographic");
    }
    for (const auto& cls : pref.weak_component()) {
        if (cls.size() != 1) {
            throw std::invalid_argument("richness_counterexample: supply component must be strict");
        }
    }
    const Allotment endow{HouseId{owner.value}, owner};
    if (compare(pref, owner, target, endow) != std::weak_ordering::greater) {
        throw std::invalid_argument("richness_counterexample: target is not strictly preferred to the endowment");
    }

    const auto allotments = allotment_set(n, owner);
    for (const auto& candidate : enum_preferences(n, DomainKind::DlexStrict, owner)) {
        bool ok = true;
        for (const Allotment& other : allotments) {
            const auto orig_vs_target = compare(pref, owner, other, target);
            const auto cand_vs_target = compare(candidate, owner, other, target);
            // same weak upper contour set at target
            if ((orig_vs_target != std::weak_ordering::less) != (cand_vs_target != std::weak_ordering::less)) {
                ok = false;
                break;
            }
            // same weak lower contour set at target
            if ((orig_vs_target != std::weak_ordering::greater) != (cand_vs_target != std::weak_ordering::greater)) {
                ok = false;
                break;
            }
            // endowment ranks right after target
            if (orig_vs_target == std::weak_ordering::less) {
                if (compare(candidate, owner, target, endow) != std::weak_ordering::greater ||
                    compare(candidate, owner, endow, other) == std::weak_ordering::less) {
                    ok = false;
                    break;
                }
            }
        }
        if (ok) {
            return RichnessResult{true, candidate};
        }
    }
    return RichnessResult{false, std::nullopt};
}

struct RichnessSweep {
    std::int64_t satisfiable = 0;
    std::int64_t unsatisfiable = 0;
};

/// Sweeps every strict dlex preference and every acceptable non-endowment
/// target; a positive unsatisfiable count shows the domain is not rich.
inline RichnessSweep richness_sweep(int n, AgentId owner = AgentId{1})
{
    RichnessSweep sweep;
    const auto allotments = allotment_set(n, owner);
    const Allotment endow{HouseId{owner.value}, owner};
    for (const auto& pref : enum_preferences(n, DomainKind::DlexStrict, owner)) {
        for (const Allotment& target : allotments) {
            if (compare(pref, owner, target, endow) != std::weak_ordering::greater) {
                continue;
            }
            if (richness_counterexample(pref, owner, target).satisfiable) {
                ++sweep.satisfiable;
            } else {
                ++sweep.unsatisfiable;
            }
        }
    }
    return sweep;
}

}  // namespace housetrade

#endif  // HOUSETRADE_VERIFY_HPP
