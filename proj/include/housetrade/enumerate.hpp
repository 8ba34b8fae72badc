/**
 * \file housetrade/enumerate.hpp
 *
 * \brief Deterministic enumeration of preference domains, preference
 *        profiles, and allocation spaces for the brute-force oracles.
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

#ifndef HOUSETRADE_ENUMERATE_HPP
#define HOUSETRADE_ENUMERATE_HPP

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "housetrade/model.hpp"

namespace housetrade {

enum class DomainKind {
    DlexStrict,            ///< strict demand x strict supply
    DlexWeakSupply,        ///< strict demand x weak supply
    SlexStrict,            ///< strict supply x strict demand
    SlexWeakDemand,        ///< strict supply x weak demand
    MixedStrict,           ///< union of the strict domains, deduplicated per relation
    ShapleyScarfEmbedded,  ///< strict demand, supply fully indifferent
};

inline const char* to_string(DomainKind k)
{
    switch (k) {
        case DomainKind::DlexStrict: return "dlex_strict";
        case DomainKind::DlexWeakSupply: return "dlex_weak_supply";
        case DomainKind::SlexStrict: return "slex_strict";
        case DomainKind::SlexWeakDemand: return "slex_weak_demand";
        case DomainKind::MixedStrict: return "mixed_strict";
        case DomainKind::ShapleyScarfEmbedded: return "shapley_scarf_embedded";
    }
    return "?";
}

inline DomainKind domain_kind_from_string(const std::string& s)
{
    if (s == "dlex_strict") return DomainKind::DlexStrict;
    if (s == "dlex_weak_supply") return DomainKind::DlexWeakSupply;
    if (s == "slex_strict") return DomainKind::SlexStrict;
    if (s == "slex_weak_demand") return DomainKind::SlexWeakDemand;
    if (s == "mixed_strict") return DomainKind::MixedStrict;
    if (s == "shapley_scarf_embedded") return DomainKind::ShapleyScarfEmbedded;
    throw std::invalid_argument("unknown domain kind: " + s);
}

inline std::int64_t factorial(int n)
{
    std::int64_t f = 1;
    for (int i = 2; i <= n; ++i) {
        f *= i;
    }
    return f;
}

/// Number of ordered set partitions of an n-element set (a(n) = sum of
/// binomial(n,k) * a(n-k)); 1, 1, 3, 13, 75, 541, ...
inline std::int64_t ordered_bell(int n)
{
    std::vector<std::int64_t> a(static_cast<std::size_t>(n) + 1, 0);
    a[0] = 1;
    for (int m = 1; m <= n; ++m) {
        std::int64_t binom = 1;
        for (int k = 1; k <= m; ++k) {
            binom = binom * (m - k + 1) / k;
            a[static_cast<std::size_t>(m)] += binom * a[static_cast<std::size_t>(m - k)];
        }
    }
    return a[static_cast<std::size_t>(n)];
}

/// All permutations of 1..n in lexicographic order.
inline std::vector<std::vector<int>> enum_permutations(int n)
{
    if (n < 1) {
        throw std::invalid_argument("enum_permutations: empty ground set");
    }
    std::vector<int> p(static_cast<std::size_t>(n));
    std::iota(p.begin(), p.end(), 1);
    std::vector<std::vector<int>> out;
    out.reserve(static_cast<std::size_t>(factorial(n)));
    do {
        out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
}

template <typename T>
std::vector<StrictOrder<T>> enum_strict_orders(int n)
{
    std::vector<StrictOrder<T>> out;
    for (const auto& p : enum_permutations(n)) {
        StrictOrder<T> o;
        o.ranking.reserve(p.size());
        for (int v : p) {
            o.ranking.push_back(T{v});
        }
        out.push_back(std::move(o));
    }
    return out;
}

/// All ordered set partitions of 1..n. Canonical order: enumerate level
/// vectors (element -> class index) lexicographically and keep those
/// whose used levels are exactly 0..max.
template <typename T>
std::vector<WeakOrder<T>> enum_weak_orders(int n)
{
    if (n < 1) {
        throw std::invalid_argument("enum_weak_orders: empty ground set");
    }
    std::vector<WeakOrder<T>> out;
    std::vector<int> level(static_cast<std::size_t>(n), 0);
    while (true) {
        int max_level = 0;
        for (int l : level) {
            max_level = std::max(max_level, l);
        }
        std::vector<char> used(static_cast<std::size_t>(max_level) + 1, 0);
        for (int l : level) {
            used[static_cast<std::size_t>(l)] = 1;
        }
        if (std::all_of(used.begin(), used.end(), [](char c) { return c != 0; })) {
            WeakOrder<T> w;
            w.classes.assign(static_cast<std::size_t>(max_level) + 1, {});
            for (int e = 1; e <= n; ++e) {
                w.classes[static_cast<std::size_t>(level[static_cast<std::size_t>(e - 1)])].push_back(T{e});
            }
            out.push_back(std::move(w));
        }
        int pos = n - 1;
        while (pos >= 0 && level[static_cast<std::size_t>(pos)] == n - 1) {
            level[static_cast<std::size_t>(pos)] = 0;
            --pos;
        }
        if (pos < 0) {
            break;
        }
        ++level[static_cast<std::size_t>(pos)];
    }
    return out;
}

/// Every preference of the given agent in the domain, exactly once, in a
/// fixed order (strict component major, weak component minor). The mixed
/// domain is deduplicated at the relation level: two structurally
/// different preferences inducing the same ordering of the agent's
/// allotment set are yielded once.
inline std::vector<LexPreference> enum_preferences(int n, DomainKind kind, AgentId agent)
{
    if (agent.value < 1 || agent.value > n) {
        throw std::invalid_argument("enum_preferences: agent outside the market");
    }
    std::vector<LexPreference> out;
    const auto demand_orders = enum_strict_orders<HouseId>(n);
    switch (kind) {
        case DomainKind::DlexStrict: {
            const auto supply_orders = enum_strict_orders<AgentId>(n);
            for (const auto& d : demand_orders) {
                for (const auto& s : supply_orders) {
                    out.push_back(LexPreference::demand_lex(d, WeakOrder<AgentId>::from_strict(s)));
                }
            }
            break;
        }
        case DomainKind::DlexWeakSupply: {
            const auto supply_weak = enum_weak_orders<AgentId>(n);
            for (const auto& d : demand_orders) {
                for (const auto& s : supply_weak) {
                    out.push_back(LexPreference::demand_lex(d, s));
                }
            }
            break;
        }
        case DomainKind::SlexStrict: {
            const auto supply_orders = enum_strict_orders<AgentId>(n);
            for (const auto& s : supply_orders) {
                for (const auto& d : demand_orders) {
                    out.push_back(LexPreference::supply_lex(s, WeakOrder<HouseId>::from_strict(d)));
                }
            }
            break;
        }
        case DomainKind::SlexWeakDemand: {
            const auto supply_orders = enum_strict_orders<AgentId>(n);
            const auto demand_weak = enum_weak_orders<HouseId>(n);
            for (const auto& s : supply_orders) {
                for (const auto& d : demand_weak) {
                    out.push_back(LexPreference::supply_lex(s, d));
                }
            }
            break;
        }
        case DomainKind::ShapleyScarfEmbedded: {
            for (const auto& d : demand_orders) {
                out.push_back(LexPreference::demand_lex(d, WeakOrder<AgentId>::single_class(n)));
            }
            break;
        }
        case DomainKind::MixedStrict: {
            std::vector<LexPreference> candidates = enum_preferences(n, DomainKind::DlexStrict, agent);
            auto slex = enum_preferences(n, DomainKind::SlexStrict, agent);
            candidates.insert(candidates.end(), slex.begin(), slex.end());
            std::vector<std::vector<int>> keys;
            for (const auto& p : candidates) {
                auto key = allotment_levels(p, agent);
                if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                    keys.push_back(std::move(key));
                    out.push_back(p);
                }
            }
            break;
        }
    }
    return out;
}

/// Structurally distinct dlex/slex pairs that collapse to one relation
/// in the mixed domain; recorded as a regression value per n.
inline std::int64_t mixed_strict_overlap(int n, AgentId agent)
{
    const auto dlex = enum_preferences(n, DomainKind::DlexStrict, agent);
    const auto slex = enum_preferences(n, DomainKind::SlexStrict, agent);
    std::vector<std::vector<int>> dlex_keys;
    for (const auto& p : dlex) {
        auto key = allotment_levels(p, agent);
        if (std::find(dlex_keys.begin(), dlex_keys.end(), key) == dlex_keys.end()) {
            dlex_keys.push_back(std::move(key));
        }
    }
    std::vector<std::vector<int>> slex_keys;
    for (const auto& p : slex) {
        auto key = allotment_levels(p, agent);
        if (std::find(slex_keys.begin(), slex_keys.end(), key) == slex_keys.end()) {
            slex_keys.push_back(std::move(key));
        }
    }
    std::int64_t overlap = 0;
    for (const auto& key : dlex_keys) {
        if (std::find(slex_keys.begin(), slex_keys.end(), key) != slex_keys.end()) {
            ++overlap;
        }
    }
    return overlap;
}

struct DomainDescriptor {
    int n;
    DomainKind kind;
    std::int64_t per_agent_count;

    static DomainDescriptor make(int n, DomainKind kind)
    {
        DomainDescriptor d{n, kind, 0};
        d.per_agent_count = static_cast<std::int64_t>(enum_preferences(n, kind, AgentId{1}).size());
        return d;
    }

    std::int64_t profile_count() const
    {
        std::int64_t total = 1;
        for (int i = 0; i < n; ++i) {
            total *= per_agent_count;
        }
        return total;
    }
};

/**
 * Cartesian product of the per-agent preference lists, addressed by a
 * single profile index. The index is decoded most-significant digit =
 * agent 1, so the stream is lexicographic over per-agent digits and any
 * index range is a valid shard.
 */
class ProfileSpace {
public:
    ProfileSpace(int n, DomainKind kind) : n_(n), kind_(kind)
    {
        per_agent_.reserve(static_cast<std::size_t>(n));
        for (int agent = 1; agent <= n; ++agent) {
            per_agent_.push_back(enum_preferences(n, kind, AgentId{agent}));
        }
        per_agent_count_ = static_cast<std::int64_t>(per_agent_.front().size());
        count_ = 1;
        for (int i = 0; i < n; ++i) {
            count_ *= per_agent_count_;
        }
    }

    int n() const { return n_; }
    DomainKind kind() const { return kind_; }
    std::int64_t count() const { return count_; }
    std::int64_t per_agent_count() const { return per_agent_count_; }

    const std::vector<LexPreference>& preferences_of(int agent) const
    {
        return per_agent_[static_cast<std::size_t>(agent - 1)];
    }

    std::vector<std::int64_t> digits(std::int64_t index) const
    {
        std::vector<std::int64_t> d(static_cast<std::size_t>(n_));
        for (int agent = n_; agent >= 1; --agent) {
            d[static_cast<std::size_t>(agent - 1)] = index % per_agent_count_;
            index /= per_agent_count_;
        }
        return d;
    }

    std::int64_t index_of(const std::vector<std::int64_t>& digits) const
    {
        std::int64_t index = 0;
        for (int agent = 1; agent <= n_; ++agent) {
            index = index * per_agent_count_ + digits[static_cast<std::size_t>(agent - 1)];
        }
        return index;
    }

    Market market_at(std::int64_t index) const
    {
        const auto d = digits(index);
        std::vector<LexPreference> prefs;
        prefs.reserve(static_cast<std::size_t>(n_));
        for (int agent = 1; agent <= n_; ++agent) {
            prefs.push_back(per_agent_[static_cast<std::size_t>(agent - 1)]
                                      [static_cast<std::size_t>(d[static_cast<std::size_t>(agent - 1)])]);
        }
        return Market(n_, std::move(prefs));
    }

    /// Index of the profile family member equal to `m`, or -1 when some
    /// agent's preference is not in the per-agent list.
    std::int64_t find_index(const Market& m) const
    {
        std::vector<std::int64_t> d(static_cast<std::size_t>(n_));
        for (int agent = 1; agent <= n_; ++agent) {
            const auto& list = per_agent_[static_cast<std::size_t>(agent - 1)];
            const auto it = std::find(list.begin(), list.end(), m.preference_raw(agent));
            if (it == list.end()) {
                return -1;
            }
            d[static_cast<std::size_t>(agent - 1)] = it - list.begin();
        }
        return index_of(d);
    }

private:
    int n_;
    DomainKind kind_;
    std::vector<std::vector<LexPreference>> per_agent_;
    std::int64_t per_agent_count_ = 0;
    std::int64_t count_ = 0;
};

inline std::vector<Market> enum_profiles(int n, DomainKind kind, std::int64_t max_profiles = 1'000'000)
{
    ProfileSpace space(n, kind);
    if (space.count() > max_profiles) {
        throw BoundExceededError("enum_profiles: profile space larger than the configured bound");
    }
    std::vector<Market> out;
    out.reserve(static_cast<std::size_t>(space.count()));
    for (std::int64_t i = 0; i < space.count(); ++i) {
        out.push_back(space.market_at(i));
    }
    return out;
}

/// All n! allocations in lexicographic order of the assignment vector.
inline std::vector<Allocation> enum_allocations(int n, int bound = 8)
{
    if (n > bound) {
        throw BoundExceededError("enum_allocations: market size exceeds the brute-force bound");
    }
    std::vector<Allocation> out;
    out.reserve(static_cast<std::size_t>(factorial(n)));
    for (auto& p : enum_permutations(n)) {
        out.push_back(Allocation(std::move(p)));
    }
    return out;
}

}  // namespace housetrade

#endif  // HOUSETRADE_ENUMERATE_HPP
