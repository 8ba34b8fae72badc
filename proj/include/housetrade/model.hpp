/**
 * \file housetrade/model.hpp
 *
 * \brief Core types for housing markets with limited externalities:
 *        agents, houses, lexicographic preferences over allotments,
 *        allocations, and the three-valued allotment comparison.
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

#ifndef HOUSETRADE_MODEL_HPP
#define HOUSETRADE_MODEL_HPP

#include <algorithm>
#include <compare>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace housetrade {

/// Agents and houses are 1-indexed; agent i is endowed with house h_i.
struct AgentId {
    int value = 0;

    friend constexpr auto operator<=>(AgentId, AgentId) = default;
};

struct HouseId {
    int value = 0;

    friend constexpr auto operator<=>(HouseId, HouseId) = default;
};

/// The pair an agent evaluates: the house he receives and the agent who
/// receives his endowment. For owner i either both components are the
/// endowment pair (h_i, i) or neither is.
struct Allotment {
    HouseId house;
    AgentId recipient;

    friend constexpr auto operator<=>(const Allotment&, const Allotment&) = default;
};

/// Total order over a ground set of agents or houses, best first.
template <typename T>
struct StrictOrder {
    std::vector<T> ranking;

    bool is_permutation_of(int n) const
    {
        if (static_cast<int>(ranking.size()) != n) {
            return false;
        }
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        for (const T& t : ranking) {
            if (t.value < 1 || t.value > n || seen[static_cast<std::size_t>(t.value - 1)]) {
                return false;
            }
            seen[static_cast<std::size_t>(t.value - 1)] = 1;
        }
        return true;
    }

    friend bool operator==(const StrictOrder&, const StrictOrder&) = default;
};

/// Ordered partition into indifference classes, best class first.
/// Canonical form keeps each class sorted ascending, so two weak orders
/// denote the same relation iff their class sequences are equal.
template <typename T>
struct WeakOrder {
    std::vector<std::vector<T>> classes;

    static WeakOrder single_class(int n)
    {
        WeakOrder w;
        w.classes.emplace_back();
        w.classes.front().reserve(static_cast<std::size_t>(n));
        for (int v = 1; v <= n; ++v) {
            w.classes.front().push_back(T{v});
        }
        return w;
    }

    static WeakOrder from_strict(const StrictOrder<T>& order)
    {
        WeakOrder w;
        w.classes.reserve(order.ranking.size());
        for (const T& t : order.ranking) {
            w.classes.push_back({t});
        }
        return w;
    }

    void canonicalize()
    {
        for (auto& cls : classes) {
            std::sort(cls.begin(), cls.end());
        }
    }

    bool is_partition_of(int n) const
    {
        std::vector<char> seen(static_cast<std::size_t>(n), 0);
        int count = 0;
        for (const auto& cls : classes) {
            if (cls.empty()) {
                return false;
            }
            for (const T& t : cls) {
                if (t.value < 1 || t.value > n || seen[static_cast<std::size_t>(t.value - 1)]) {
                    return false;
                }
                seen[static_cast<std::size_t>(t.value - 1)] = 1;
                ++count;
            }
        }
        return count == n;
    }

    friend bool operator==(const WeakOrder&, const WeakOrder&) = default;
};

enum class PrefKind {
    DemandLex,  ///< strict demand order over houses, weak supply order over agents
    SupplyLex,  ///< strict supply order over agents, weak demand order over houses
};

inline const char* to_string(PrefKind k)
{
    return k == PrefKind::DemandLex ? "dlex" : "slex";
}

/**
 * One agent's lexicographic preference over his allotments.
 *
 * Demand-lexicographic: (h,j) beats (h',k) iff h is demand-better than h',
 * or h = h' and j is supply-better than k. Supply-lexicographic mirrors
 * the two roles. The strict component is stored as a ranking, the weak
 * component as an ordered partition; both are kept in canonical form.
 */
class LexPreference {
public:
    static LexPreference demand_lex(StrictOrder<HouseId> demand, WeakOrder<AgentId> supply)
    {
        const int n = static_cast<int>(demand.ranking.size());
        if (!demand.is_permutation_of(n)) {
            throw std::invalid_argument("demand_lex: demand ranking is not a permutation of the houses");
        }
        supply.canonicalize();
        if (!supply.is_partition_of(n)) {
            throw std::invalid_argument("demand_lex: supply classes do not partition the agents");
        }
        return LexPreference(PrefKind::DemandLex, strip(demand.ranking), strip(supply.classes), n);
    }

    static LexPreference supply_lex(StrictOrder<AgentId> supply, WeakOrder<HouseId> demand)
    {
        const int n = static_cast<int>(supply.ranking.size());
        if (!supply.is_permutation_of(n)) {
            throw std::invalid_argument("supply_lex: supply ranking is not a permutation of the agents");
        }
        demand.canonicalize();
        if (!demand.is_partition_of(n)) {
            throw std::invalid_argument("supply_lex: demand classes do not partition the houses");
        }
        return LexPreference(PrefKind::SupplyLex, strip(supply.ranking), strip(demand.classes), n);
    }

    /// Builds without invariant checks so that validation can report
    /// violations as data instead of refusing construction.
    static LexPreference unchecked(PrefKind kind, std::vector<int> strict_part,
                                   std::vector<std::vector<int>> weak_part, int n)
    {
        return LexPreference(kind, std::move(strict_part), std::move(weak_part), n);
    }

    PrefKind kind() const { return kind_; }
    int size() const { return n_; }

    /// Strict ranking, best first (houses for dlex, agents for slex).
    const std::vector<int>& strict_component() const { return strict_; }
    /// Indifference classes, best first (agents for dlex, houses for slex).
    const std::vector<std::vector<int>>& weak_component() const { return weak_; }

    StrictOrder<HouseId> demand_order() const
    {
        require(kind_ == PrefKind::DemandLex, "demand_order: preference is not demand-lexicographic");
        return StrictOrder<HouseId>{wrap<HouseId>(strict_)};
    }

    WeakOrder<AgentId> supply_classes() const
    {
        require(kind_ == PrefKind::DemandLex, "supply_classes: preference is not demand-lexicographic");
        return WeakOrder<AgentId>{wrap2<AgentId>(weak_)};
    }

    StrictOrder<AgentId> supply_order() const
    {
        require(kind_ == PrefKind::SupplyLex, "supply_order: preference is not supply-lexicographic");
        return StrictOrder<AgentId>{wrap<AgentId>(strict_)};
    }

    WeakOrder<HouseId> demand_classes() const
    {
        require(kind_ == PrefKind::SupplyLex, "demand_classes: preference is not supply-lexicographic");
        return WeakOrder<HouseId>{wrap2<HouseId>(weak_)};
    }

    /// Rank of a house (strict position for dlex, class index for slex);
    /// smaller is better, -1 if the house does not appear.
    int house_rank(int house) const { return house_rank_[static_cast<std::size_t>(house - 1)]; }
    /// Rank of a recipient agent (class index for dlex, strict position for slex).
    int agent_rank(int agent) const { return agent_rank_[static_cast<std::size_t>(agent - 1)]; }

    /// Best house among a 1-based membership mask; requires a strict demand component.
    int top_house_among(const std::vector<char>& house_alive) const
    {
        require(kind_ == PrefKind::DemandLex, "top_house_among: needs a strict demand order");
        for (int h : strict_) {
            if (house_alive[static_cast<std::size_t>(h - 1)]) {
                return h;
            }
        }
        throw std::invalid_argument("top_house_among: no house is alive");
    }

    int top_agent_among(const std::vector<char>& agent_alive) const
    {
        require(kind_ == PrefKind::SupplyLex, "top_agent_among: needs a strict supply order");
        for (int a : strict_) {
            if (agent_alive[static_cast<std::size_t>(a - 1)]) {
                return a;
            }
        }
        throw std::invalid_argument("top_agent_among: no agent is alive");
    }

    friend bool operator==(const LexPreference& a, const LexPreference& b)
    {
        return a.kind_ == b.kind_ && a.n_ == b.n_ && a.strict_ == b.strict_ && a.weak_ == b.weak_;
    }

private:
    LexPreference(PrefKind kind, std::vector<int> strict_part,
                  std::vector<std::vector<int>> weak_part, int n)
        : kind_(kind), n_(n), strict_(std::move(strict_part)), weak_(std::move(weak_part))
    {
        auto& strict_rank = kind_ == PrefKind::DemandLex ? house_rank_ : agent_rank_;
        auto& weak_rank = kind_ == PrefKind::DemandLex ? agent_rank_ : house_rank_;
        strict_rank.assign(static_cast<std::size_t>(n_), -1);
        weak_rank.assign(static_cast<std::size_t>(n_), -1);
        for (std::size_t pos = 0; pos < strict_.size(); ++pos) {
            const int v = strict_[pos];
            if (v >= 1 && v <= n_ && strict_rank[static_cast<std::size_t>(v - 1)] < 0) {
                strict_rank[static_cast<std::size_t>(v - 1)] = static_cast<int>(pos);
            }
        }
        for (std::size_t cls = 0; cls < weak_.size(); ++cls) {
            for (const int v : weak_[cls]) {
                if (v >= 1 && v <= n_ && weak_rank[static_cast<std::size_t>(v - 1)] < 0) {
                    weak_rank[static_cast<std::size_t>(v - 1)] = static_cast<int>(cls);
                }
            }
        }
    }

    static void require(bool ok, const char* msg)
    {
        if (!ok) {
            throw std::logic_error(msg);
        }
    }

    template <typename T>
    static std::vector<int> strip(const std::vector<T>& xs)
    {
        std::vector<int> out;
        out.reserve(xs.size());
        for (const T& x : xs) {
            out.push_back(x.value);
        }
        return out;
    }

    template <typename T>
    static std::vector<std::vector<int>> strip(const std::vector<std::vector<T>>& xs)
    {
        std::vector<std::vector<int>> out;
        out.reserve(xs.size());
        for (const auto& cls : xs) {
            out.push_back(strip(cls));
        }
        return out;
    }

    template <typename T>
    static std::vector<T> wrap(const std::vector<int>& xs)
    {
        std::vector<T> out;
        out.reserve(xs.size());
        for (int x : xs) {
            out.push_back(T{x});
        }
        return out;
    }

    template <typename T>
    static std::vector<std::vector<T>> wrap2(const std::vector<std::vector<int>>& xs)
    {
        std::vector<std::vector<T>> out;
        out.reserve(xs.size());
        for (const auto& cls : xs) {
            out.push_back(wrap<T>(cls));
        }
        return out;
    }

    PrefKind kind_;
    int n_;
    std::vector<int> strict_;
    std::vector<std::vector<int>> weak_;
    std::vector<int> house_rank_;
    std::vector<int> agent_rank_;
};

/// Bijection from agents to houses with O(1) inverse lookup.
class Allocation {
public:
    explicit Allocation(std::vector<int> houses_by_agent)
        : to_house_(std::move(houses_by_agent))
    {
        const int n = static_cast<int>(to_house_.size());
        of_house_.assign(static_cast<std::size_t>(n), 0);
        for (int agent = 1; agent <= n; ++agent) {
            const int h = to_house_[static_cast<std::size_t>(agent - 1)];
            if (h < 1 || h > n) {
                throw std::invalid_argument("Allocation: house index out of range");
            }
            if (of_house_[static_cast<std::size_t>(h - 1)] != 0) {
                throw std::invalid_argument("Allocation: two agents receive the same house");
            }
            of_house_[static_cast<std::size_t>(h - 1)] = agent;
        }
    }

    explicit Allocation(const std::vector<HouseId>& houses_by_agent)
        : Allocation(strip(houses_by_agent))
    {
    }

    static Allocation endowment(int n)
    {
        std::vector<int> v(static_cast<std::size_t>(n));
        for (int i = 1; i <= n; ++i) {
            v[static_cast<std::size_t>(i - 1)] = i;
        }
        return Allocation(std::move(v));
    }

    int size() const { return static_cast<int>(to_house_.size()); }

    HouseId house_of(AgentId agent) const { return HouseId{to_house_[static_cast<std::size_t>(agent.value - 1)]}; }
    AgentId agent_of(HouseId house) const { return AgentId{of_house_[static_cast<std::size_t>(house.value - 1)]}; }

    int house_of_raw(int agent) const { return to_house_[static_cast<std::size_t>(agent - 1)]; }
    int agent_of_raw(int house) const { return of_house_[static_cast<std::size_t>(house - 1)]; }

    /// Houses by agent position, 1-based values.
    const std::vector<int>& raw() const { return to_house_; }

    friend bool operator==(const Allocation& a, const Allocation& b) { return a.to_house_ == b.to_house_; }
    friend auto operator<=>(const Allocation& a, const Allocation& b) { return a.to_house_ <=> b.to_house_; }

private:
    static std::vector<int> strip(const std::vector<HouseId>& xs)
    {
        std::vector<int> out;
        out.reserve(xs.size());
        for (HouseId x : xs) {
            out.push_back(x.value);
        }
        return out;
    }

    std::vector<int> to_house_;
    std::vector<int> of_house_;
};

/// A market is the number of agents plus one preference per agent; the
/// endowment map is implicit (agent i owns house h_i).
class Market {
public:
    Market(int n, std::vector<LexPreference> preferences)
        : n_(n), preferences_(std::move(preferences))
    {
        if (n_ < 1) {
            throw std::invalid_argument("Market: need at least one agent");
        }
        if (static_cast<int>(preferences_.size()) != n_) {
            throw std::invalid_argument("Market: exactly one preference per agent required");
        }
    }

    int size() const { return n_; }

    const LexPreference& preference(AgentId agent) const
    {
        return preferences_[static_cast<std::size_t>(agent.value - 1)];
    }

    const LexPreference& preference_raw(int agent) const
    {
        return preferences_[static_cast<std::size_t>(agent - 1)];
    }

    void set_preference(AgentId agent, LexPreference pref)
    {
        preferences_[static_cast<std::size_t>(agent.value - 1)] = std::move(pref);
    }

    /// The common kind when all agents share one, nullopt for mixed markets.
    std::optional<PrefKind> uniform_kind() const
    {
        const PrefKind k = preferences_.front().kind();
        for (const auto& p : preferences_) {
            if (p.kind() != k) {
                return std::nullopt;
            }
        }
        return k;
    }

    friend bool operator==(const Market& a, const Market& b)
    {
        return a.n_ == b.n_ && a.preferences_ == b.preferences_;
    }

private:
    int n_;
    std::vector<LexPreference> preferences_;
};

/// Thrown when a brute-force operation is asked to exceed its configured bound.
class BoundExceededError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Thrown when the TTC rule is applied to a market mixing dlex and slex agents.
class MixedDomainError : public std::domain_error {
public:
    MixedDomainError() : std::domain_error("TTC rule undefined on mixed lexicographic domain") {}
};

inline Allotment allotment_of(const Allocation& a, AgentId i)
{
    return Allotment{a.house_of(i), a.agent_of(HouseId{i.value})};
}

/// Comparison on raw indices without range checks; hot path for the
/// enumeration sweeps. Greater means the first allotment is better.
inline std::weak_ordering compare_raw(const LexPreference& pref, int house_x, int recipient_x,
                                      int house_y, int recipient_y)
{
    int px;
    int py;
    int sx;
    int sy;
    if (pref.kind() == PrefKind::DemandLex) {
        px = pref.house_rank(house_x);
        py = pref.house_rank(house_y);
        sx = pref.agent_rank(recipient_x);
        sy = pref.agent_rank(recipient_y);
    } else {
        px = pref.agent_rank(recipient_x);
        py = pref.agent_rank(recipient_y);
        sx = pref.house_rank(house_x);
        sy = pref.house_rank(house_y);
    }
    if (px != py) {
        return px < py ? std::weak_ordering::greater : std::weak_ordering::less;
    }
    if (sx != sy) {
        return sx < sy ? std::weak_ordering::greater : std::weak_ordering::less;
    }
    return std::weak_ordering::equivalent;
}

/**
 * Three-valued comparison of two allotments of the given owner.
 * Returns greater iff x is strictly better than y, equivalent iff the
 * primary components tie and the secondary components share an
 * indifference class. The induced relation is complete and transitive.
 */
inline std::weak_ordering compare(const LexPreference& pref, AgentId owner,
                                  const Allotment& x, const Allotment& y)
{
    const int n = pref.size();
    for (const Allotment& t : {x, y}) {
        if (t.house.value < 1 || t.house.value > n || t.recipient.value < 1 || t.recipient.value > n) {
            throw std::invalid_argument("compare: allotment references a house or agent outside the ground set");
        }
        if ((t.house.value == owner.value) != (t.recipient.value == owner.value)) {
            throw std::invalid_argument("compare: allotment breaks the endowment pairing for its owner");
        }
    }
    return compare_raw(pref, x.house.value, x.recipient.value, y.house.value, y.recipient.value);
}

inline bool strictly_prefers(const LexPreference& pref, AgentId owner, const Allotment& x, const Allotment& y)
{
    return compare(pref, owner, x, y) == std::weak_ordering::greater;
}

inline bool weakly_prefers(const LexPreference& pref, AgentId owner, const Allotment& x, const Allotment& y)
{
    return compare(pref, owner, x, y) != std::weak_ordering::less;
}

/// Embeds a classical strict-demand market: every agent becomes
/// demand-lexicographic with a fully indifferent supply component.
inline Market embed_shapley_scarf(const std::vector<StrictOrder<HouseId>>& demand_profile)
{
    const int n = static_cast<int>(demand_profile.size());
    if (n < 1) {
        throw std::invalid_argument("embed_shapley_scarf: empty demand profile");
    }
    std::vector<LexPreference> prefs;
    prefs.reserve(demand_profile.size());
    for (const auto& demand : demand_profile) {
        if (!demand.is_permutation_of(n)) {
            throw std::invalid_argument("embed_shapley_scarf: incomplete demand order");
        }
        prefs.push_back(LexPreference::demand_lex(demand, WeakOrder<AgentId>::single_class(n)));
    }
    return Market(n, std::move(prefs));
}

struct Violation {
    AgentId agent;
    std::string message;
};

namespace detail {

inline void check_component(int n, int agent, bool strict, const char* role,
                            const std::vector<int>& ranking,
                            const std::vector<std::vector<int>>& classes,
                            std::vector<Violation>& out)
{
    std::vector<int> seen(static_cast<std::size_t>(n), 0);
    int total = 0;
    auto visit = [&](int v) {
        if (v < 1 || v > n) {
            out.push_back({AgentId{agent}, std::string(role) + " entry out of range"});
            return;
        }
        if (seen[static_cast<std::size_t>(v - 1)]++) {
            out.push_back({AgentId{agent}, std::string("duplicate entry in ") + role});
        }
        ++total;
    };
    if (strict) {
        for (int v : ranking) {
            visit(v);
        }
    } else {
        for (const auto& cls : classes) {
            if (cls.empty()) {
                out.push_back({AgentId{agent}, std::string("empty indifference class in ") + role});
            }
            for (int v : cls) {
                visit(v);
            }
        }
    }
    if (total < n) {
        out.push_back({AgentId{agent}, std::string("incomplete ") + role});
    }
}

}  // namespace detail

/// Checks every type invariant; an empty result means the market is
/// well-formed. Violations name the offending agent and invariant.
inline std::vector<Violation> validate_market(const Market& m)
{
    std::vector<Violation> out;
    const int n = m.size();
    for (int agent = 1; agent <= n; ++agent) {
        const LexPreference& p = m.preference_raw(agent);
        if (p.size() != n) {
            out.push_back({AgentId{agent}, "preference sized to a different market"});
            continue;
        }
        static const std::vector<std::vector<int>> no_classes;
        static const std::vector<int> no_ranking;
        if (p.kind() == PrefKind::DemandLex) {
            detail::check_component(n, agent, true, "demand order", p.strict_component(), no_classes, out);
            detail::check_component(n, agent, false, "supply classes", no_ranking, p.weak_component(), out);
        } else {
            detail::check_component(n, agent, true, "supply order", p.strict_component(), no_classes, out);
            detail::check_component(n, agent, false, "demand classes", no_ranking, p.weak_component(), out);
        }
    }
    return out;
}

/// Canonical enumeration of the allotment set of the given owner:
/// houses ascending, recipients ascending, the endowment pair in place
/// of the owner's house block.
inline std::vector<Allotment> allotment_set(int n, AgentId owner)
{
    std::vector<Allotment> out;
    for (int h = 1; h <= n; ++h) {
        if (h == owner.value) {
            out.push_back({HouseId{h}, owner});
            continue;
        }
        for (int j = 1; j <= n; ++j) {
            if (j != owner.value) {
                out.push_back({HouseId{h}, AgentId{j}});
            }
        }
    }
    return out;
}

/// Level of each allotment in canonical order (0 = best); two
/// preferences induce the same relation iff their level vectors match.
inline std::vector<int> allotment_levels(const LexPreference& pref, AgentId owner)
{
    const auto allotments = allotment_set(pref.size(), owner);
    std::vector<int> levels(allotments.size(), 0);
    for (std::size_t i = 0; i < allotments.size(); ++i) {
        int better = 0;
        for (std::size_t j = 0; j < allotments.size(); ++j) {
            if (compare(pref, owner, allotments[j], allotments[i]) == std::weak_ordering::greater) {
                ++better;
            }
        }
        levels[i] = better;
    }
    return levels;
}

/// Equality of preference relations (not of their structural tags).
inline bool same_relation(const LexPreference& a, const LexPreference& b, AgentId owner)
{
    if (a.size() != b.size()) {
        return false;
    }
    return allotment_levels(a, owner) == allotment_levels(b, owner);
}

}  // namespace housetrade

#endif  // HOUSETRADE_MODEL_HPP
