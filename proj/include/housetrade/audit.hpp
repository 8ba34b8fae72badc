/**
 * \file housetrade/audit.hpp
 *
 * \brief Rule-level audits over enumerated preference domains:
 *        strategy-proofness and group strategy-proofness, allocation
 *        property sweeps, the implication-chain sweep, a rule-existence
 *        CSP with forward checking, the mixed-domain impossibility
 *        verifier, and the TTC uniqueness probe.
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

#ifndef HOUSETRADE_AUDIT_HPP
#define HOUSETRADE_AUDIT_HPP

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "housetrade/enumerate.hpp"
#include "housetrade/fixtures.hpp"
#include "housetrade/model.hpp"
#include "housetrade/ttc.hpp"
#include "housetrade/verify.hpp"

namespace housetrade {

using Rule = std::function<Allocation(const Market&)>;

struct NamedRule {
    std::string name;
    Rule fn;
};

/// A rule handed a market of the wrong shape, or returning an allocation
/// of the wrong size, aborts the audit.
class RuleIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline NamedRule make_ttc_rule()
{
    return {"ttc", [](const Market& m) { return ttc_rule(m); }};
}

/// Positive control for the audits: runs TTC, then swaps the houses of
/// agents 1 and 2 whenever agent 1's reported demand order tops h2.
inline NamedRule make_broken_ttc_rule()
{
    return {"broken-ttc", [](const Market& m) {
                Allocation a = ttc_rule(m);
                if (m.size() >= 2 && m.preference_raw(1).kind() == PrefKind::DemandLex &&
                    m.preference_raw(1).strict_component().front() == 2) {
                    std::vector<int> v = a.raw();
                    std::swap(v[0], v[1]);
                    return Allocation(std::move(v));
                }
                return a;
            }};
}

/// Serial dictatorship by agent index on demand orders, with no regard
/// for endowments: strategy-proof but not individually rational.
inline NamedRule make_serial_dictatorship_rule()
{
    return {"serial-dictatorship", [](const Market& m) {
                std::vector<char> house_alive(static_cast<std::size_t>(m.size()), 1);
                std::vector<int> houses(static_cast<std::size_t>(m.size()), 0);
                for (int agent = 1; agent <= m.size(); ++agent) {
                    const int pick = m.preference_raw(agent).top_house_among(house_alive);
                    houses[static_cast<std::size_t>(agent - 1)] = pick;
                    house_alive[static_cast<std::size_t>(pick - 1)] = 0;
                }
                return Allocation(std::move(houses));
            }};
}

inline NamedRule rule_by_name(const std::string& name)
{
    if (name == "ttc") {
        return make_ttc_rule();
    }
    if (name == "broken-ttc") {
        return make_broken_ttc_rule();
    }
    if (name == "serial-dictatorship") {
        return make_serial_dictatorship_rule();
    }
    throw std::invalid_argument("unknown rule: " + name);
}

struct AuditViolation {
    std::int64_t profile_index = 0;
    std::vector<int> coalition;              ///< deviating agents, ascending
    std::vector<std::int64_t> misreports;    ///< reported preference digits, one per coalition member
    std::vector<Allotment> truthful;         ///< allotments at the truthful profile
    std::vector<Allotment> deviated;         ///< allotments at the deviation profile

    friend bool operator==(const AuditViolation& a, const AuditViolation& b)
    {
        return a.profile_index == b.profile_index && a.coalition == b.coalition &&
               a.misreports == b.misreports && a.truthful == b.truthful && a.deviated == b.deviated;
    }
};

struct RuleAuditReport {
    DomainDescriptor domain;
    std::string rule;
    std::string audit;
    std::int64_t profiles_checked = 0;
    std::int64_t deviations_checked = 0;
    std::vector<AuditViolation> violations;
    bool truncated = false;
};

namespace audit_detail {

inline void parallel_ranges(std::int64_t count, int jobs,
                            const std::function<void(int, std::int64_t, std::int64_t)>& body)
{
    jobs = std::clamp(jobs, 1, 64);
    if (jobs == 1 || count < jobs) {
        body(0, 0, count);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int k = 0; k < jobs; ++k) {
        const std::int64_t lo = count * k / jobs;
        const std::int64_t hi = count * (k + 1) / jobs;
        workers.emplace_back([&body, k, lo, hi] { body(k, lo, hi); });
    }
    for (auto& w : workers) {
        w.join();
    }
}

/// Profile space plus lookup tables: per-agent allotments at every
/// allocation and, lazily per audit, a (-1,0,+1) comparison table per
/// (agent, preference digit) pair.
struct DomainContext {
    ProfileSpace space;
    std::vector<Allocation> allocations;
    int alloc_count;
    std::vector<std::vector<int>> lot_house;      // [agent-1][alloc]
    std::vector<std::vector<int>> lot_recipient;  // [agent-1][alloc]
    std::vector<std::vector<std::int8_t>> cmp;    // [(agent-1)*per_agent+digit][a*A+b]
    std::map<std::vector<int>, int> alloc_index;

    DomainContext(int n, DomainKind kind) : space(n, kind), allocations(enum_allocations(n))
    {
        alloc_count = static_cast<int>(allocations.size());
        lot_house.assign(static_cast<std::size_t>(n), std::vector<int>(allocations.size()));
        lot_recipient.assign(static_cast<std::size_t>(n), std::vector<int>(allocations.size()));
        for (int agent = 1; agent <= n; ++agent) {
            for (std::size_t a = 0; a < allocations.size(); ++a) {
                lot_house[static_cast<std::size_t>(agent - 1)][a] = allocations[a].house_of_raw(agent);
                lot_recipient[static_cast<std::size_t>(agent - 1)][a] = allocations[a].agent_of_raw(agent);
            }
        }
        for (std::size_t a = 0; a < allocations.size(); ++a) {
            alloc_index.emplace(allocations[a].raw(), static_cast<int>(a));
        }
        cmp.assign(static_cast<std::size_t>(n) * static_cast<std::size_t>(space.per_agent_count()), {});
        for (int agent = 1; agent <= n; ++agent) {
            const auto& prefs = space.preferences_of(agent);
            for (std::size_t digit = 0; digit < prefs.size(); ++digit) {
                auto& table = cmp[static_cast<std::size_t>(agent - 1) * prefs.size() + digit];
                table.resize(static_cast<std::size_t>(alloc_count) * static_cast<std::size_t>(alloc_count));
                for (int a = 0; a < alloc_count; ++a) {
                    for (int b = 0; b < alloc_count; ++b) {
                        const auto c = compare_raw(prefs[digit],
                                                   lot_house[static_cast<std::size_t>(agent - 1)]
                                                            [static_cast<std::size_t>(a)],
                                                   lot_recipient[static_cast<std::size_t>(agent - 1)]
                                                                [static_cast<std::size_t>(a)],
                                                   lot_house[static_cast<std::size_t>(agent - 1)]
                                                            [static_cast<std::size_t>(b)],
                                                   lot_recipient[static_cast<std::size_t>(agent - 1)]
                                                                [static_cast<std::size_t>(b)]);
                        table[static_cast<std::size_t>(a) * static_cast<std::size_t>(alloc_count) +
                              static_cast<std::size_t>(b)] =
                            c == std::weak_ordering::greater ? 1 : (c == std::weak_ordering::less ? -1 : 0);
                    }
                }
            }
        }
    }

    std::int8_t compare_allocs(int agent, std::int64_t digit, int a, int b) const
    {
        return cmp[static_cast<std::size_t>(agent - 1) *
                       static_cast<std::size_t>(space.per_agent_count()) +
                   static_cast<std::size_t>(digit)]
                  [static_cast<std::size_t>(a) * static_cast<std::size_t>(alloc_count) +
                   static_cast<std::size_t>(b)];
    }

    Allotment allotment(int agent, int alloc) const
    {
        return Allotment{HouseId{lot_house[static_cast<std::size_t>(agent - 1)][static_cast<std::size_t>(alloc)]},
                         AgentId{lot_recipient[static_cast<std::size_t>(agent - 1)][static_cast<std::size_t>(alloc)]}};
    }

    /// Evaluates the rule on every profile, sharded; entries are
    /// independent, so the table is worker-count invariant.
    std::vector<int> rule_table(const NamedRule& rule, int jobs) const
    {
        std::vector<int> table(static_cast<std::size_t>(space.count()), -1);
        std::vector<std::string> errors(64);
        parallel_ranges(space.count(), jobs, [&](int worker, std::int64_t lo, std::int64_t hi) {
            for (std::int64_t p = lo; p < hi; ++p) {
                Market m = space.market_at(p);
                Allocation a = rule.fn(m);
                if (a.size() != space.n()) {
                    errors[static_cast<std::size_t>(worker)] =
                        "rule returned an allocation of the wrong size";
                    return;
                }
                table[static_cast<std::size_t>(p)] = alloc_index.at(a.raw());
            }
        });
        for (const auto& e : errors) {
            if (!e.empty()) {
                throw RuleIntegrityError("rule integrity: " + e);
            }
        }
        return table;
    }
};

inline std::vector<std::int64_t> strides(int n, std::int64_t per_agent)
{
    std::vector<std::int64_t> s(static_cast<std::size_t>(n), 1);
    for (int agent = n - 1; agent >= 1; --agent) {
        s[static_cast<std::size_t>(agent - 1)] = s[static_cast<std::size_t>(agent)] * per_agent;
    }
    return s;
}

}  // namespace audit_detail

/**
 * Exhaustive strategy-proofness audit: for every profile in the domain,
 * every agent, and every unilateral misreport inside the same domain,
 * checks that the truthful allotment is weakly preferred. Violations are
 * listed in (profile, agent, misreport) order, so reports are identical
 * across runs and worker counts.
 */
inline RuleAuditReport audit_strategy_proofness(const NamedRule& rule, int n, DomainKind kind,
                                                int jobs = 1, std::int64_t max_profiles = 2'000'000)
{
    const audit_detail::DomainContext ctx(n, kind);
    if (ctx.space.count() > max_profiles) {
        throw BoundExceededError("audit_strategy_proofness: profile space exceeds the exhaustive bound");
    }
    const auto table = ctx.rule_table(rule, jobs);
    const auto stride = audit_detail::strides(n, ctx.space.per_agent_count());
    const std::int64_t per_agent = ctx.space.per_agent_count();

    RuleAuditReport report;
    report.domain = DomainDescriptor{n, kind, per_agent};
    report.rule = rule.name;
    report.audit = "strategy_proofness";
    report.profiles_checked = ctx.space.count();
    report.deviations_checked = ctx.space.count() * n * (per_agent - 1);

    std::vector<std::vector<AuditViolation>> found(64);
    audit_detail::parallel_ranges(ctx.space.count(), jobs, [&](int worker, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) {
            const auto digits = ctx.space.digits(p);
            const int truth_alloc = table[static_cast<std::size_t>(p)];
            for (int agent = 1; agent <= n; ++agent) {
                const std::int64_t own = digits[static_cast<std::size_t>(agent - 1)];
                const std::int64_t base = p - own * stride[static_cast<std::size_t>(agent - 1)];
                for (std::int64_t d = 0; d < per_agent; ++d) {
                    if (d == own) {
                        continue;
                    }
                    const std::int64_t q = base + d * stride[static_cast<std::size_t>(agent - 1)];
                    const int dev_alloc = table[static_cast<std::size_t>(q)];
                    if (ctx.compare_allocs(agent, own, dev_alloc, truth_alloc) > 0) {
                        AuditViolation v;
                        v.profile_index = p;
                        v.coalition = {agent};
                        v.misreports = {d};
                        v.truthful = {ctx.allotment(agent, truth_alloc)};
                        v.deviated = {ctx.allotment(agent, dev_alloc)};
                        found[static_cast<std::size_t>(worker)].push_back(std::move(v));
                    }
                }
            }
        }
    });
    for (auto& chunk : found) {
        report.violations.insert(report.violations.end(), chunk.begin(), chunk.end());
    }
    return report;
}

/**
 * Group strategy-proofness: coalitions jointly misreport; a violation
 * needs every member weakly better off and one strictly. For each
 * (profile, coalition) the set of improving allocations is computed
 * first; joint misreports are only enumerated when it is non-empty.
 * Single-threaded so that a violation cap stays deterministic.
 */
inline RuleAuditReport audit_group_strategy_proofness(const NamedRule& rule, int n, DomainKind kind,
                                                      std::int64_t max_violations = 0,
                                                      std::int64_t max_profiles = 50'000)
{
    const audit_detail::DomainContext ctx(n, kind);
    if (ctx.space.count() > max_profiles) {
        throw BoundExceededError("audit_group_strategy_proofness: profile space exceeds the exhaustive bound");
    }
    if (ctx.alloc_count > 64) {
        throw BoundExceededError("audit_group_strategy_proofness: allocation space exceeds the mask width");
    }
    const auto table = ctx.rule_table(rule, 1);
    const auto stride = audit_detail::strides(n, ctx.space.per_agent_count());
    const std::int64_t per_agent = ctx.space.per_agent_count();
    const auto coalitions = detail::coalitions_minimal_first(n);

    RuleAuditReport report;
    report.domain = DomainDescriptor{n, kind, per_agent};
    report.rule = rule.name;
    report.audit = "group_strategy_proofness";
    report.profiles_checked = ctx.space.count();

    std::vector<std::int64_t> combo_digits;
    for (std::int64_t p = 0; p < ctx.space.count(); ++p) {
        const auto digits = ctx.space.digits(p);
        const int truth_alloc = table[static_cast<std::size_t>(p)];
        for (const auto& members : coalitions) {
            std::int64_t combos = 1;
            for (std::size_t k = 0; k < members.size(); ++k) {
                combos *= per_agent;
            }
            report.deviations_checked += combos;
            // improving allocations: all members weakly better, one strictly
            std::uint64_t improving = 0;
            for (int a = 0; a < ctx.alloc_count; ++a) {
                bool all_weak = true;
                bool one_strict = false;
                for (int agent : members) {
                    const auto c = ctx.compare_allocs(agent, digits[static_cast<std::size_t>(agent - 1)],
                                                      a, truth_alloc);
                    if (c < 0) {
                        all_weak = false;
                        break;
                    }
                    if (c > 0) {
                        one_strict = true;
                    }
                }
                if (all_weak && one_strict) {
                    improving |= std::uint64_t{1} << a;
                }
            }
            if (improving == 0) {
                continue;
            }
            // enumerate joint misreports of the coalition
            combo_digits.assign(members.size(), 0);
            std::int64_t base = p;
            for (std::size_t k = 0; k < members.size(); ++k) {
                base -= digits[static_cast<std::size_t>(members[k] - 1)] *
                        stride[static_cast<std::size_t>(members[k] - 1)];
            }
            while (true) {
                std::int64_t q = base;
                for (std::size_t k = 0; k < members.size(); ++k) {
                    q += combo_digits[k] * stride[static_cast<std::size_t>(members[k] - 1)];
                }
                const int dev_alloc = table[static_cast<std::size_t>(q)];
                if (improving & (std::uint64_t{1} << dev_alloc)) {
                    AuditViolation v;
                    v.profile_index = p;
                    v.coalition = members;
                    v.misreports = combo_digits;
                    for (int agent : members) {
                        v.truthful.push_back(ctx.allotment(agent, truth_alloc));
                        v.deviated.push_back(ctx.allotment(agent, dev_alloc));
                    }
                    report.violations.push_back(std::move(v));
                    if (max_violations > 0 &&
                        static_cast<std::int64_t>(report.violations.size()) >= max_violations) {
                        report.truncated = true;
                        return report;
                    }
                }
                std::size_t k = members.size();
                while (k > 0 && combo_digits[k - 1] == per_agent - 1) {
                    combo_digits[k - 1] = 0;
                    --k;
                }
                if (k == 0) {
                    break;
                }
                ++combo_digits[k - 1];
            }
        }
    }
    return report;
}

struct PropertyFailure {
    std::int64_t profile_index = 0;
    PropertyReport report;
};

struct PropertyAuditReport {
    DomainDescriptor domain;
    std::string rule;
    std::vector<AllocationProperty> properties;
    std::int64_t profiles_checked = 0;
    std::vector<PropertyFailure> failures;
};

/**
 * Sweeps every profile of the domain and checks the rule's allocation
 * against the requested properties via the brute-force checkers.
 */
inline PropertyAuditReport audit_rule_allocation_properties(const NamedRule& rule, int n, DomainKind kind,
                                                            std::vector<AllocationProperty> properties,
                                                            int jobs = 1,
                                                            std::int64_t max_profiles = 2'000'000)
{
    const audit_detail::DomainContext ctx(n, kind);
    if (ctx.space.count() > max_profiles) {
        throw BoundExceededError("audit_rule_allocation_properties: profile space exceeds the bound");
    }
    const auto table = ctx.rule_table(rule, jobs);

    PropertyAuditReport report;
    report.domain = DomainDescriptor{n, kind, ctx.space.per_agent_count()};
    report.rule = rule.name;
    report.properties = properties;
    report.profiles_checked = ctx.space.count();

    std::vector<std::vector<PropertyFailure>> found(64);
    audit_detail::parallel_ranges(ctx.space.count(), jobs, [&](int worker, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) {
            const Market m = ctx.space.market_at(p);
            const Allocation& a = ctx.allocations[static_cast<std::size_t>(table[static_cast<std::size_t>(p)])];
            for (AllocationProperty property : properties) {
                PropertyReport r;
                switch (property) {
                    case AllocationProperty::IndividualRationality: r = is_individually_rational(m, a); break;
                    case AllocationProperty::ParetoEfficiency: r = is_pareto_efficient(m, a); break;
                    case AllocationProperty::PairEfficiency: r = is_pair_efficient(m, a); break;
                    case AllocationProperty::Stability: r = is_stable(m, a); break;
                    case AllocationProperty::PairwiseStability: r = is_pairwise_stable(m, a); break;
                    case AllocationProperty::StrongCore: r = in_strong_core(m, a); break;
                }
                if (!r.holds) {
                    found[static_cast<std::size_t>(worker)].push_back({p, std::move(r)});
                }
            }
        }
    });
    for (auto& chunk : found) {
        report.failures.insert(report.failures.end(), chunk.begin(), chunk.end());
    }
    return report;
}

struct ImplicationChainReport {
    DomainDescriptor domain;
    std::int64_t profiles_checked = 0;
    std::int64_t pairs_checked = 0;  ///< (profile, allocation) pairs
    std::vector<std::string> exceptions;
    std::int64_t pair_efficient_not_pairwise_stable = 0;
};

/**
 * Checks, over every profile and every allocation, that strong-core
 * membership implies individual rationality, stability implies pairwise
 * stability, and pairwise stability implies pair efficiency; counts the
 * (expected) cases where pair efficiency fails to imply pairwise
 * stability.
 */
inline ImplicationChainReport sweep_implication_chain(int n, DomainKind kind, int jobs = 1,
                                                      std::int64_t max_profiles = 2'000'000)
{
    const ProfileSpace space(n, kind);
    if (space.count() > max_profiles) {
        throw BoundExceededError("sweep_implication_chain: profile space exceeds the bound");
    }
    const auto allocations = enum_allocations(n);

    ImplicationChainReport report;
    report.domain = DomainDescriptor{n, kind, space.per_agent_count()};
    report.profiles_checked = space.count();
    report.pairs_checked = space.count() * static_cast<std::int64_t>(allocations.size());

    std::vector<std::vector<std::string>> exceptions(64);
    std::vector<std::int64_t> gaps(64, 0);
    audit_detail::parallel_ranges(space.count(), jobs, [&](int worker, std::int64_t lo, std::int64_t hi) {
        for (std::int64_t p = lo; p < hi; ++p) {
            const Market m = space.market_at(p);
            for (std::size_t a = 0; a < allocations.size(); ++a) {
                const Allocation& x = allocations[a];
                const bool core = in_strong_core(m, x).holds;
                const bool ir = is_individually_rational(m, x).holds;
                const bool stable = is_stable(m, x).holds;
                const bool pairwise = is_pairwise_stable(m, x).holds;
                const bool pair = is_pair_efficient(m, x).holds;
                auto complain = [&](const char* what) {
                    std::ostringstream os;
                    os << what << " at profile " << p << ", allocation " << a;
                    exceptions[static_cast<std::size_t>(worker)].push_back(os.str());
                };
                if (core && !ir) {
                    complain("strong core without individual rationality");
                }
                if (stable && !pairwise) {
                    complain("stability without pairwise stability");
                }
                if (pairwise && !pair) {
                    complain("pairwise stability without pair efficiency");
                }
                if (pair && !pairwise) {
                    ++gaps[static_cast<std::size_t>(worker)];
                }
            }
        }
    });
    for (std::size_t k = 0; k < exceptions.size(); ++k) {
        report.exceptions.insert(report.exceptions.end(), exceptions[k].begin(), exceptions[k].end());
        report.pair_efficient_not_pairwise_stable += gaps[k];
    }
    return report;
}

// ---------------------------------------------------------------------------
// Rule-existence CSP
// ---------------------------------------------------------------------------

struct CspOptions {
    bool require_individual_rationality = true;
    bool require_pair_efficiency = true;
    bool require_pareto_efficiency = false;
    /// Enumerate the full assignment product instead of backtracking
    /// with forward checking; node count then equals the product of the
    /// per-profile feasible-set sizes.
    bool exhaustive = false;
    /// Try the TTC allocation first on homogeneous profiles.
    bool ttc_value_order = true;
    int allocation_bound = 8;
    /// Emit a deduction log when the family is at most this large.
    int trace_profile_limit = 8;
};

struct CspLink {
    int p = 0;
    int q = 0;
    int agent = 0;
};

struct CspStats {
    std::int64_t nodes = 0;
    std::int64_t constraint_checks = 0;
    /// Product of the per-profile feasible-set sizes, saturating at the
    /// int64 maximum on large families.
    std::int64_t feasible_product = 1;
    int profiles = 0;
    int links = 0;
};

struct CspResult {
    enum class Status { RuleExists, Impossible };
    Status status = Status::Impossible;
    std::vector<Allocation> assignment;              ///< one per profile when RuleExists
    std::vector<std::vector<Allocation>> feasible;   ///< the per-profile variable domains
    std::vector<CspLink> links;
    std::vector<std::string> trace;
    CspStats stats;
};

/// Removes one allocation from one profile's domain; lets the searches
/// ask for rules that differ from a reference rule somewhere.
struct CspExclusion {
    int profile = 0;
    Allocation allocation;
};

namespace audit_detail {

inline std::string alloc_str(const Allocation& a)
{
    std::string s = "(";
    for (int i = 1; i <= a.size(); ++i) {
        s += "h" + std::to_string(a.house_of_raw(i));
        if (i < a.size()) {
            s += ",";
        }
    }
    return s + ")";
}

struct CspInstance {
    const std::vector<Market>* profiles;
    std::vector<std::vector<int>> domains;  // candidate allocation ids, value-ordered
    std::vector<Allocation> allocations;
    std::vector<CspLink> links;
    std::vector<std::vector<int>> links_of;  // link ids touching each variable

    /// Allowed iff neither direction of the strategy-proofness link is
    /// profitable: the deviator must not strictly gain judged by his
    /// preference at whichever profile is truthful.
    bool link_allows(const CspLink& link, int alloc_p, int alloc_q, CspStats& stats) const
    {
        ++stats.constraint_checks;
        const Market& mp = (*profiles)[static_cast<std::size_t>(link.p)];
        const Market& mq = (*profiles)[static_cast<std::size_t>(link.q)];
        const AgentId agent{link.agent};
        const Allotment at_p = allotment_of(allocations[static_cast<std::size_t>(alloc_p)], agent);
        const Allotment at_q = allotment_of(allocations[static_cast<std::size_t>(alloc_q)], agent);
        if (compare(mp.preference(agent), agent, at_q, at_p) == std::weak_ordering::greater) {
            return false;  // truthful at p, gains by reporting q's preference
        }
        if (compare(mq.preference(agent), agent, at_p, at_q) == std::weak_ordering::greater) {
            return false;  // truthful at q, gains by reporting p's preference
        }
        return true;
    }
};

}  // namespace audit_detail

/**
 * Decides whether some rule can assign each profile of the family an
 * allocation satisfying the requested allocation-level properties while
 * respecting strategy-proofness between profiles that differ in exactly
 * one agent's preference. Backtracking with forward checking; variable
 * order is fewest-feasible-first, value order tries TTC first.
 */
inline CspResult rule_csp_search(const std::vector<Market>& profiles, const CspOptions& options = {},
                                 const std::vector<CspExclusion>& exclusions = {})
{
    if (profiles.empty()) {
        throw std::invalid_argument("rule_csp_search: empty profile family");
    }
    const int n = profiles.front().size();
    for (const Market& m : profiles) {
        if (m.size() != n) {
            throw std::invalid_argument("rule_csp_search: profiles of different sizes");
        }
    }

    audit_detail::CspInstance inst;
    inst.profiles = &profiles;
    inst.allocations = enum_allocations(n, options.allocation_bound);

    CspResult result;
    result.stats.profiles = static_cast<int>(profiles.size());
    const bool want_trace = static_cast<int>(profiles.size()) <= options.trace_profile_limit;

    // variable domains: allocations passing the allocation-level constraints
    for (std::size_t v = 0; v < profiles.size(); ++v) {
        const Market& m = profiles[v];
        std::vector<int> domain;
        std::vector<Allocation> feasible;
        for (std::size_t a = 0; a < inst.allocations.size(); ++a) {
            const Allocation& x = inst.allocations[a];
            const bool excluded = std::any_of(exclusions.begin(), exclusions.end(), [&](const CspExclusion& e) {
                return e.profile == static_cast<int>(v) && e.allocation == x;
            });
            if (excluded) {
                continue;
            }
            if (options.require_individual_rationality && !is_individually_rational(m, x).holds) {
                continue;
            }
            if (options.require_pair_efficiency && !is_pair_efficient(m, x).holds) {
                continue;
            }
            if (options.require_pareto_efficiency &&
                !is_pareto_efficient(m, x, options.allocation_bound).holds) {
                continue;
            }
            domain.push_back(static_cast<int>(a));
            feasible.push_back(x);
        }
        if (options.ttc_value_order && m.uniform_kind().has_value()) {
            const Allocation t = ttc_rule(m);
            const auto it = std::find_if(domain.begin(), domain.end(), [&](int id) {
                return inst.allocations[static_cast<std::size_t>(id)] == t;
            });
            if (it != domain.end()) {
                std::rotate(domain.begin(), it, it + 1);
            }
        }
        const auto size = static_cast<std::int64_t>(domain.size());
        if (size == 0) {
            result.stats.feasible_product = 0;
        } else if (result.stats.feasible_product >
                   std::numeric_limits<std::int64_t>::max() / size) {
            result.stats.feasible_product = std::numeric_limits<std::int64_t>::max();
        } else {
            result.stats.feasible_product *= size;
        }
        result.feasible.push_back(std::move(feasible));
        inst.domains.push_back(std::move(domain));
        if (want_trace) {
            std::ostringstream os;
            os << "profile#" << v << " feasible:";
            for (int id : inst.domains.back()) {
                os << " " << audit_detail::alloc_str(inst.allocations[static_cast<std::size_t>(id)]);
            }
            result.trace.push_back(os.str());
        }
    }

    // strategy-proofness links between unilateral-deviation pairs
    inst.links_of.assign(profiles.size(), {});
    for (std::size_t p = 0; p < profiles.size(); ++p) {
        for (std::size_t q = p + 1; q < profiles.size(); ++q) {
            int differing = 0;
            int agent = 0;
            for (int i = 1; i <= n && differing <= 1; ++i) {
                if (!(profiles[p].preference_raw(i) == profiles[q].preference_raw(i))) {
                    ++differing;
                    agent = i;
                }
            }
            if (differing == 1) {
                inst.links_of[p].push_back(static_cast<int>(inst.links.size()));
                inst.links_of[q].push_back(static_cast<int>(inst.links.size()));
                inst.links.push_back({static_cast<int>(p), static_cast<int>(q), agent});
            }
        }
    }
    result.links = inst.links;
    result.stats.links = static_cast<int>(inst.links.size());
    if (want_trace) {
        for (const CspLink& link : inst.links) {
            std::ostringstream os;
            os << "link profile#" << link.p << " <-> profile#" << link.q << " (deviating agent "
               << link.agent << ")";
            result.trace.push_back(os.str());
        }
    }

    const std::size_t vars = profiles.size();
    std::vector<int> assignment(vars, -1);

    if (options.exhaustive) {
        // full product enumeration; every complete assignment is one node
        std::vector<std::size_t> pick(vars, 0);
        bool done = std::any_of(inst.domains.begin(), inst.domains.end(),
                                [](const auto& d) { return d.empty(); });
        while (!done) {
            ++result.stats.nodes;
            bool ok = true;
            for (const CspLink& link : inst.links) {
                if (!inst.link_allows(link,
                                      inst.domains[static_cast<std::size_t>(link.p)]
                                                  [pick[static_cast<std::size_t>(link.p)]],
                                      inst.domains[static_cast<std::size_t>(link.q)]
                                                  [pick[static_cast<std::size_t>(link.q)]],
                                      result.stats)) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                result.status = CspResult::Status::RuleExists;
                for (std::size_t v = 0; v < vars; ++v) {
                    result.assignment.push_back(inst.allocations[static_cast<std::size_t>(
                        inst.domains[v][pick[v]])]);
                }
                return result;
            }
            std::size_t v = vars;
            while (v > 0 && pick[v - 1] + 1 == inst.domains[v - 1].size()) {
                pick[v - 1] = 0;
                --v;
            }
            if (v == 0) {
                break;
            }
            ++pick[v - 1];
        }
        result.status = CspResult::Status::Impossible;
        if (want_trace) {
            result.trace.push_back("exhausted the full assignment product; no rule exists on this family");
        }
        return result;
    }

    // forward checking: alive[v] marks the values of domains[v] still viable
    std::vector<std::vector<char>> alive(vars);
    for (std::size_t v = 0; v < vars; ++v) {
        alive[v].assign(inst.domains[v].size(), 1);
    }

    struct Pruned {
        std::size_t var;
        std::size_t value;
    };

    std::function<bool(int)> search = [&](int depth) -> bool {
        // fewest remaining values first
        int best = -1;
        std::size_t best_count = 0;
        for (std::size_t v = 0; v < vars; ++v) {
            if (assignment[v] >= 0) {
                continue;
            }
            const std::size_t count = static_cast<std::size_t>(
                std::count(alive[v].begin(), alive[v].end(), char{1}));
            if (best < 0 || count < best_count) {
                best = static_cast<int>(v);
                best_count = count;
            }
        }
        if (best < 0) {
            return true;  // everything assigned
        }
        const std::size_t v = static_cast<std::size_t>(best);
        for (std::size_t idx = 0; idx < inst.domains[v].size(); ++idx) {
            if (!alive[v][idx]) {
                continue;
            }
            ++result.stats.nodes;
            const int value = inst.domains[v][idx];
            assignment[v] = value;
            if (want_trace) {
                std::ostringstream os;
                os << std::string(static_cast<std::size_t>(depth) * 2, ' ') << "try profile#" << v
                   << " := " << audit_detail::alloc_str(inst.allocations[static_cast<std::size_t>(value)]);
                result.trace.push_back(os.str());
            }
            std::vector<Pruned> pruned;
            bool dead = false;
            for (int link_id : inst.links_of[v]) {
                const CspLink& link = inst.links[static_cast<std::size_t>(link_id)];
                const std::size_t other = static_cast<std::size_t>(link.p == static_cast<int>(v) ? link.q
                                                                                                 : link.p);
                if (assignment[other] >= 0) {
                    const int ap = link.p == static_cast<int>(v) ? value : assignment[other];
                    const int aq = link.p == static_cast<int>(v) ? assignment[other] : value;
                    if (!inst.link_allows(link, ap, aq, result.stats)) {
                        dead = true;
                        break;
                    }
                    continue;
                }
                std::size_t remaining = 0;
                for (std::size_t jdx = 0; jdx < inst.domains[other].size(); ++jdx) {
                    if (!alive[other][jdx]) {
                        continue;
                    }
                    const int candidate = inst.domains[other][jdx];
                    const int ap = link.p == static_cast<int>(v) ? value : candidate;
                    const int aq = link.p == static_cast<int>(v) ? candidate : value;
                    if (!inst.link_allows(link, ap, aq, result.stats)) {
                        alive[other][jdx] = 0;
                        pruned.push_back({other, jdx});
                        if (want_trace) {
                            std::ostringstream os;
                            os << std::string(static_cast<std::size_t>(depth) * 2 + 2, ' ')
                               << "prune profile#" << other << " value "
                               << audit_detail::alloc_str(
                                      inst.allocations[static_cast<std::size_t>(candidate)])
                               << " (deviating agent " << link.agent << ")";
                            result.trace.push_back(os.str());
                        }
                    } else {
                        ++remaining;
                    }
                }
                if (remaining == 0) {
                    if (want_trace) {
                        std::ostringstream os;
                        os << std::string(static_cast<std::size_t>(depth) * 2 + 2, ' ') << "profile#"
                           << other << " has no feasible allocation left; backtrack";
                        result.trace.push_back(os.str());
                    }
                    dead = true;
                    break;
                }
            }
            if (!dead && search(depth + 1)) {
                return true;
            }
            for (const Pruned& u : pruned) {
                alive[u.var][u.value] = 1;
            }
            assignment[v] = -1;
        }
        return false;
    };

    const bool found = std::none_of(inst.domains.begin(), inst.domains.end(),
                                    [](const auto& d) { return d.empty(); }) &&
                       search(0);
    if (found) {
        result.status = CspResult::Status::RuleExists;
        for (std::size_t v = 0; v < vars; ++v) {
            result.assignment.push_back(inst.allocations[static_cast<std::size_t>(assignment[v])]);
        }
    } else {
        result.status = CspResult::Status::Impossible;
        if (want_trace) {
            result.trace.push_back("every branch exhausted; no rule exists on this family");
        }
    }
    return result;
}

/// BFS closure of the seed profiles under up-to-depth unilateral
/// deviations inside the declared domain.
inline std::vector<Market> close_profile_family(std::vector<Market> seeds, DomainKind kind, int depth,
                                                std::int64_t max_family = 4096)
{
    if (seeds.empty()) {
        throw std::invalid_argument("close_profile_family: no seeds");
    }
    const int n = seeds.front().size();
    std::vector<std::vector<LexPreference>> per_agent;
    for (int agent = 1; agent <= n; ++agent) {
        per_agent.push_back(enum_preferences(n, kind, AgentId{agent}));
    }
    std::vector<Market> family = std::move(seeds);
    std::size_t frontier_begin = 0;
    for (int level = 0; level < depth; ++level) {
        const std::size_t frontier_end = family.size();
        for (std::size_t f = frontier_begin; f < frontier_end; ++f) {
            for (int agent = 1; agent <= n; ++agent) {
                for (const LexPreference& alt : per_agent[static_cast<std::size_t>(agent - 1)]) {
                    Market neighbor = family[f];
                    neighbor.set_preference(AgentId{agent}, alt);
                    if (std::find(family.begin(), family.end(), neighbor) == family.end()) {
                        family.push_back(std::move(neighbor));
                        if (static_cast<std::int64_t>(family.size()) > max_family) {
                            throw BoundExceededError(
                                "close_profile_family: closed family exceeds the configured bound");
                        }
                    }
                }
            }
        }
        frontier_begin = frontier_end;
    }
    return family;
}

// ---------------------------------------------------------------------------
// Impossibility witness and uniqueness probe
// ---------------------------------------------------------------------------

struct ImpossibilityReport {
    int n = 3;
    bool force_dlex = false;
    bool assertions_hold = false;
    std::vector<std::string> replay;
    CspResult csp;
};

namespace audit_detail {

inline std::vector<Allocation> ir_and_pair_efficient(const Market& m)
{
    std::vector<Allocation> out;
    for (const Allocation& a : enum_allocations(m.size())) {
        if (is_individually_rational(m, a).holds && is_pair_efficient(m, a).holds) {
            out.push_back(a);
        }
    }
    return out;
}

inline Allocation padded(std::vector<int> base, int n)
{
    for (int v = 4; v <= n; ++v) {
        base.push_back(v);
    }
    return Allocation(std::move(base));
}

}  // namespace audit_detail

/**
 * Mechanically verifies the mixed-domain impossibility at the bundled
 * scenario: (1) the individually rational and pair efficient set at the
 * seed is exactly {x, y}; (2) after agent 3's deviation it is exactly
 * {y}; (3) after agent 1's deviation it is exactly {x}; (4) whichever of
 * x, y a rule picks at the seed, the corresponding deviator strictly
 * gains, so no rule survives. The CSP over the three-profile family
 * independently confirms the verdict. With `force_dlex` the same family
 * becomes all demand-lexicographic and a rule (TTC) exists.
 */
inline ImpossibilityReport verify_impossibility_witness(int n = 3, bool force_dlex = false)
{
    ImpossibilityReport report;
    report.n = n;
    report.force_dlex = force_dlex;

    const Market seed = fixtures::theorem4_seed(n, force_dlex);
    const Market dev3 = fixtures::theorem4_agent3_deviation(n, force_dlex);
    const Market dev1 = fixtures::theorem4_agent1_deviation(n, force_dlex);
    const Allocation x = audit_detail::padded({2, 3, 1}, n);
    const Allocation y = audit_detail::padded({3, 2, 1}, n);

    const auto seed_set = audit_detail::ir_and_pair_efficient(seed);
    const auto dev3_set = audit_detail::ir_and_pair_efficient(dev3);
    const auto dev1_set = audit_detail::ir_and_pair_efficient(dev1);

    auto set_str = [](const std::vector<Allocation>& xs) {
        std::string s = "{";
        for (std::size_t i = 0; i < xs.size(); ++i) {
            s += audit_detail::alloc_str(xs[i]);
            if (i + 1 < xs.size()) {
                s += ", ";
            }
        }
        return s + "}";
    };

    if (!force_dlex) {
        const bool a1 = seed_set == std::vector<Allocation>{x, y};
        const bool a2 = dev3_set == std::vector<Allocation>{y};
        const bool a3 = dev1_set == std::vector<Allocation>{x};
        report.replay.push_back(std::string(a1 ? "ok" : "FAIL") +
                                ": IR & pair-efficient at the seed profile = " + set_str(seed_set) +
                                ", expected {" + audit_detail::alloc_str(x) + ", " +
                                audit_detail::alloc_str(y) + "}");
        report.replay.push_back(std::string(a2 ? "ok" : "FAIL") +
                                ": after agent 3 reports supply 1 > 3 > 2 the set = " + set_str(dev3_set) +
                                ", expected {" + audit_detail::alloc_str(y) + "}");
        report.replay.push_back(std::string(a3 ? "ok" : "FAIL") +
                                ": after agent 1 reports demand h2 > h1 > h3 the set = " +
                                set_str(dev1_set) + ", expected {" + audit_detail::alloc_str(x) + "}");
        // branch x: the rule must hand agent 3 allocation y at dev3, a strict gain
        const bool branch_x = strictly_prefers(seed.preference(AgentId{3}), AgentId{3},
                                               allotment_of(y, AgentId{3}), allotment_of(x, AgentId{3}));
        // branch y: the rule must hand agent 1 allocation x at dev1, a strict gain
        const bool branch_y = strictly_prefers(seed.preference(AgentId{1}), AgentId{1},
                                               allotment_of(x, AgentId{1}), allotment_of(y, AgentId{1}));
        const bool a4 = branch_x && branch_y;
        report.replay.push_back(std::string(a4 ? "ok" : "FAIL") +
                                ": both branches violate strategy-proofness (pick x => agent 3 gains by"
                                " deviating to y; pick y => agent 1 gains by deviating to x)");
        report.assertions_hold = a1 && a2 && a3 && a4;
        if (!report.assertions_hold) {
            throw std::logic_error("verify_impossibility_witness: fixture integrity check failed");
        }
    } else {
        report.replay.push_back("IR & pair-efficient at the seed profile = " + set_str(seed_set));
        report.replay.push_back("after agent 3's deviation the set = " + set_str(dev3_set));
        report.replay.push_back("after agent 1's deviation the set = " + set_str(dev1_set));
        report.assertions_hold = true;
    }

    report.csp = rule_csp_search(fixtures::theorem4_family(n, force_dlex));
    report.replay.push_back(std::string("csp: ") +
                            (report.csp.status == CspResult::Status::Impossible
                                 ? "no rule satisfies the constraints on this family"
                                 : "a rule exists on this family"));
    return report;
}

struct UniquenessProbeReport {
    CspResult::Status status = CspResult::Status::Impossible;
    std::int64_t family_size = 0;
    /// Family member where a divergent assignment exists, when found.
    std::optional<int> divergent_profile;
    std::optional<CspResult> divergent_result;
    std::vector<std::string> trace;
};

/**
 * Searches the closed profile family for a rule satisfying individual
 * rationality, pair efficiency, and the strategy-proofness links that
 * differs from TTC on at least one profile. Impossible means TTC is the
 * only such rule on this family.
 */
inline UniquenessProbeReport uniqueness_probe(const std::vector<Market>& seeds, DomainKind kind,
                                              int depth, std::int64_t max_family = 4096,
                                              CspOptions options = {})
{
    if (kind == DomainKind::MixedStrict) {
        throw std::invalid_argument("uniqueness_probe: TTC is undefined on the mixed domain");
    }
    const auto family = close_profile_family(seeds, kind, depth, max_family);

    UniquenessProbeReport report;
    report.family_size = static_cast<std::int64_t>(family.size());
    options.trace_profile_limit = 0;

    for (std::size_t q = 0; q < family.size(); ++q) {
        const Allocation t = ttc_rule(family[q]);
        CspResult r = rule_csp_search(family, options, {{static_cast<int>(q), t}});
        if (r.status == CspResult::Status::RuleExists) {
            report.status = CspResult::Status::RuleExists;
            report.divergent_profile = static_cast<int>(q);
            report.divergent_result = std::move(r);
            report.trace.push_back("a rule diverging from the trading-cycles outcome exists at family member " +
                                   std::to_string(q));
            return report;
        }
    }
    report.status = CspResult::Status::Impossible;
    report.trace.push_back("no rule satisfying the constraints diverges from the trading-cycles outcome "
                           "anywhere on the closed family");
    return report;
}

}  // namespace housetrade

#endif  // HOUSETRADE_AUDIT_HPP
