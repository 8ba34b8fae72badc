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

// Acceptance suite: every criterion below is pinned to an exact expected
// outcome and, where stated, a wall-clock budget. Run with no arguments
// for the full battery or with criterion numbers to select.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "housetrade/audit.hpp"
#include "housetrade/enumerate.hpp"
#include "housetrade/fixtures.hpp"
#include "housetrade/market_io.hpp"
#include "housetrade/ttc.hpp"
#include "housetrade/verify.hpp"

namespace {

using namespace housetrade;

Allocation alloc(std::vector<int> houses)
{
    return Allocation(std::move(houses));
}

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;

    void require(bool condition, const std::string& what)
    {
        if (!condition) {
            pass = false;
            details.push_back(what);
        }
    }
};

// 1. multi-valued strong core scenario: exact trading-cycles outcome,
//    exact core, agent 2's strict ranking between the two, both stable
Outcome criterion1()
{
    Outcome out;
    const Market m = fixtures::example2();
    out.require(ttc_rule(m) == alloc({2, 1, 3}), "trading-cycles outcome is not (h2,h1,h3)");
    const auto core = strong_core(m);
    out.require(core == std::vector<Allocation>{alloc({2, 1, 3}), alloc({2, 3, 1})},
                "strong core is not exactly {(h2,h1,h3), (h2,h3,h1)}");
    out.require(strictly_prefers(m.preference(AgentId{2}), AgentId{2},
                                 allotment_of(alloc({2, 1, 3}), AgentId{2}),
                                 allotment_of(alloc({2, 3, 1}), AgentId{2})),
                "agent 2 does not strictly prefer (h2,h1,h3) to (h2,h3,h1)");
    out.require(is_stable(m, alloc({2, 1, 3})).holds, "(h2,h1,h3) is not stable");
    out.require(is_stable(m, alloc({2, 3, 1})).holds, "(h2,h3,h1) is not stable");
    return out;
}

// 2. pair efficiency without pairwise stability, with the exact witness
Outcome criterion2()
{
    Outcome out;
    const Market m = fixtures::example1();
    const Allocation a = alloc({1, 3, 2});
    out.require(is_pair_efficient(m, a).holds, "(h1,h3,h2) is not pair efficient");
    const auto report = is_pairwise_stable(m, a);
    out.require(!report.holds, "(h1,h3,h2) is pairwise stable");
    out.require(report.witness.has_value() &&
                    report.witness->agents == std::vector<AgentId>{AgentId{1}, AgentId{2}} &&
                    *report.witness->alternative == alloc({3, 1, 2}),
                "pairwise-instability witness is not agents {1,2} swapping to (h3,h1,h2)");
    return out;
}

// 3. mixed-domain impossibility: exact feasible sets at the seed and the
//    two deviations, no rule on the family, preserved under padding
Outcome criterion3()
{
    Outcome out;
    for (int n : {3, 4}) {
        std::vector<int> x{2, 3, 1};
        std::vector<int> y{3, 2, 1};
        for (int v = 4; v <= n; ++v) {
            x.push_back(v);
            y.push_back(v);
        }
        const auto report = verify_impossibility_witness(n);
        out.require(report.assertions_hold, "replay assertions failed at n=" + std::to_string(n));
        out.require(report.csp.feasible.size() == 3, "family size is not 3");
        out.require(report.csp.feasible[0] == std::vector<Allocation>{alloc(x), alloc(y)},
                    "seed feasible set is not {x, y} at n=" + std::to_string(n));
        out.require(report.csp.feasible[1] == std::vector<Allocation>{alloc(y)},
                    "feasible set after agent 3's deviation is not {y} at n=" + std::to_string(n));
        out.require(report.csp.feasible[2] == std::vector<Allocation>{alloc(x)},
                    "feasible set after agent 1's deviation is not {x} at n=" + std::to_string(n));
        out.require(report.csp.status == CspResult::Status::Impossible,
                    "csp did not return impossible at n=" + std::to_string(n));
    }
    return out;
}

const std::vector<AllocationProperty> kRuleProperties = {
    AllocationProperty::StrongCore,
    AllocationProperty::IndividualRationality,
    AllocationProperty::ParetoEfficiency,
    AllocationProperty::Stability,
};

// 4. exhaustive run over all 46,656 strict-dlex profiles: the rule output
//    is a strong-core member, individually rational, Pareto efficient,
//    and stable everywhere
Outcome criterion4()
{
    Outcome out;
    const auto single = audit_rule_allocation_properties(make_ttc_rule(), 3, DomainKind::DlexStrict,
                                                         kRuleProperties, 1);
    out.require(single.profiles_checked == 46656, "profile count is not 46656");
    out.require(single.failures.empty(),
                "property failures on the strict dlex domain: " + std::to_string(single.failures.size()));
    const auto eight = audit_rule_allocation_properties(make_ttc_rule(), 3, DomainKind::DlexStrict,
                                                        kRuleProperties, 8);
    out.require(eight.failures.empty(), "property failures with eight workers");
    return out;
}

// 5. exhaustive strategy-proofness audit, with the sabotaged rule as a
//    positive control
Outcome criterion5()
{
    Outcome out;
    const auto clean = audit_strategy_proofness(make_ttc_rule(), 3, DomainKind::DlexStrict, 1);
    out.require(clean.profiles_checked == 46656, "profile count is not 46656");
    out.require(clean.deviations_checked == 46656 * 3 * 35, "deviation count is not 46656*3*35");
    out.require(clean.violations.empty(),
                "strategy-proofness violations: " + std::to_string(clean.violations.size()));
    const auto control = audit_strategy_proofness(make_broken_ttc_rule(), 3, DomainKind::DlexStrict, 1);
    out.require(!control.violations.empty(), "the sabotaged control rule reports no violations");
    return out;
}

// 6. embedded strict-demand markets: the strong core is the singleton
//    trading-cycles outcome, exhaustively at n=3 and sampled at n=4
Outcome criterion6()
{
    Outcome out;
    const ProfileSpace small(3, DomainKind::ShapleyScarfEmbedded);
    if (small.count() != 216) {
        out.require(false, "embedded profile count at n=3 is not 216");
        return out;
    }
    for (std::int64_t index = 0; index < small.count(); ++index) {
        const Market m = small.market_at(index);
        const auto core = strong_core(m);
        if (core.size() != 1 || !(core.front() == ttc_rule(m))) {
            out.require(false, "embedded profile " + std::to_string(index) + " at n=3 breaks |SC|=1=TTC");
            return out;
        }
    }
    const ProfileSpace big(4, DomainKind::ShapleyScarfEmbedded);
    const std::int64_t stride = big.count() / 1000;
    std::int64_t sampled = 0;
    for (std::int64_t index = 0; sampled < 1000; index += stride, ++sampled) {
        const Market m = big.market_at(index);
        const auto core = strong_core(m);
        if (core.size() != 1 || !(core.front() == ttc_rule(m))) {
            out.require(false, "embedded profile " + std::to_string(index) + " at n=4 breaks |SC|=1=TTC");
            return out;
        }
    }
    out.require(sampled == 1000, "n=4 sample did not reach 1000 profiles");
    return out;
}

// 7. implication chain over every profile and every allocation, plus the
//    stored pair-efficiency/pairwise-stability gap witness
Outcome criterion7()
{
    Outcome out;
    const auto report = sweep_implication_chain(3, DomainKind::DlexStrict, 1);
    out.require(report.pairs_checked == 46656 * 6, "pair count is not 46656*6");
    out.require(report.exceptions.empty(),
                "implication-chain exceptions: " + std::to_string(report.exceptions.size()));
    out.require(report.pair_efficient_not_pairwise_stable > 0,
                "no pair-efficient but pairwise-unstable cases found");
    const Market m = fixtures::example1();
    out.require(is_pair_efficient(m, alloc({1, 3, 2})).holds &&
                    !is_pairwise_stable(m, alloc({1, 3, 2})).holds,
                "the stored gap witness does not reproduce");
    return out;
}

// 8. everything translates to the supply-lexicographic side
Outcome criterion8()
{
    Outcome out;
    const auto properties = audit_rule_allocation_properties(
        make_ttc_rule(), 3, DomainKind::SlexStrict,
        {AllocationProperty::IndividualRationality, AllocationProperty::ParetoEfficiency}, 1);
    out.require(properties.failures.empty(),
                "IR/Pareto failures on the strict slex domain: " + std::to_string(properties.failures.size()));
    const auto sp = audit_strategy_proofness(make_ttc_rule(), 3, DomainKind::SlexStrict, 1);
    out.require(sp.violations.empty(),
                "strategy-proofness violations on the strict slex domain: " +
                    std::to_string(sp.violations.size()));
    return out;
}

// 9. the demand-lexicographic domain is not rich
Outcome criterion9()
{
    Outcome out;
    const auto result = richness_counterexample(fixtures::example2_agent2_preference(), AgentId{2},
                                                Allotment{HouseId{3}, AgentId{1}});
    out.require(!result.satisfiable, "a contour-preserving transform exists for the stock instance");
    const auto sweep = richness_sweep(3);
    out.require(sweep.unsatisfiable >= 1, "the exhaustive sweep found no unsatisfiable instance");
    return out;
}

// 10. reports behind criteria 4, 5, and 8 are byte-identical for worker
//     counts 1 and 8
Outcome criterion10()
{
    Outcome out;
    const auto p1 = audit_rule_allocation_properties(make_ttc_rule(), 3, DomainKind::DlexStrict,
                                                     kRuleProperties, 1);
    const auto p8 = audit_rule_allocation_properties(make_ttc_rule(), 3, DomainKind::DlexStrict,
                                                     kRuleProperties, 8);
    out.require(property_audit_to_json(p1).dump(2) == property_audit_to_json(p8).dump(2),
                "criterion-4 report differs between 1 and 8 workers");
    const auto s1 = audit_strategy_proofness(make_ttc_rule(), 3, DomainKind::DlexStrict, 1);
    const auto s8 = audit_strategy_proofness(make_ttc_rule(), 3, DomainKind::DlexStrict, 8);
    out.require(audit_report_to_json(s1).dump(2) == audit_report_to_json(s8).dump(2),
                "criterion-5 report differs between 1 and 8 workers");
    const auto b1 = audit_strategy_proofness(make_broken_ttc_rule(), 3, DomainKind::DlexStrict, 1);
    const auto b8 = audit_strategy_proofness(make_broken_ttc_rule(), 3, DomainKind::DlexStrict, 8);
    out.require(audit_report_to_json(b1).dump(2) == audit_report_to_json(b8).dump(2),
                "positive-control report differs between 1 and 8 workers");
    const auto x1 = audit_strategy_proofness(make_ttc_rule(), 3, DomainKind::SlexStrict, 1);
    const auto x8 = audit_strategy_proofness(make_ttc_rule(), 3, DomainKind::SlexStrict, 8);
    out.require(audit_report_to_json(x1).dump(2) == audit_report_to_json(x8).dump(2),
                "criterion-8 report differs between 1 and 8 workers");
    const std::vector<AllocationProperty> slex_props = {AllocationProperty::IndividualRationality,
                                                        AllocationProperty::ParetoEfficiency};
    const auto y1 = audit_rule_allocation_properties(make_ttc_rule(), 3, DomainKind::SlexStrict,
                                                     slex_props, 1);
    const auto y8 = audit_rule_allocation_properties(make_ttc_rule(), 3, DomainKind::SlexStrict,
                                                     slex_props, 8);
    out.require(property_audit_to_json(y1).dump(2) == property_audit_to_json(y8).dump(2),
                "criterion-8 property report differs between 1 and 8 workers");
    return out;
}

struct Criterion {
    int id;
    const char* name;
    double budget_seconds;  // 0 = no stated budget
    std::function<Outcome()> run;
};

const std::vector<Criterion> kCriteria = {
    {1, "multi-valued strong core scenario reproduces exactly", 1.0, criterion1},
    {2, "pair efficiency without pairwise stability reproduces exactly", 1.0, criterion2},
    {3, "mixed-domain impossibility verified mechanically at n=3 and n=4", 5.0, criterion3},
    {4, "trading-cycles outcome is core/IR/Pareto/stable on all 46,656 strict dlex profiles", 600.0,
     criterion4},
    {5, "strategy-proofness audit clean on the strict dlex domain, control rule caught", 600.0, criterion5},
    {6, "embedded markets have singleton strong cores equal to the rule outcome", 0.0, criterion6},
    {7, "implication chain holds over every profile and allocation", 0.0, criterion7},
    {8, "supply-side symmetry: IR/Pareto/strategy-proofness clean on strict slex", 0.0, criterion8},
    {9, "demand-lexicographic domain is not rich", 60.0, criterion9},
    {10, "audit reports are byte-identical for worker counts 1 and 8", 0.0, criterion10},
};

}  // namespace

int main(int argc, char** argv)
{
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.push_back(std::atoi(argv[i]));
    }

    bool all_pass = true;
    for (const Criterion& criterion : kCriteria) {
        if (!selected.empty() &&
            std::find(selected.begin(), selected.end(), criterion.id) == selected.end()) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome outcome;
        try {
            outcome = criterion.run();
        } catch (const std::exception& e) {
            outcome.pass = false;
            outcome.details.push_back(std::string("exception: ") + e.what());
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (criterion.budget_seconds > 0 && elapsed >= criterion.budget_seconds) {
            outcome.pass = false;
            outcome.details.push_back("exceeded the stated budget of " +
                                      std::to_string(criterion.budget_seconds) + "s");
        }
        char line[512];
        std::snprintf(line, sizeof(line), "%s criterion %2d: %s [%.2fs]",
                      outcome.pass ? "PASS" : "FAIL", criterion.id, criterion.name, elapsed);
        std::cout << line << "\n";
        for (const auto& detail : outcome.details) {
            std::cerr << "       " << detail << "\n";
        }
        all_pass = all_pass && outcome.pass;
    }
    return all_pass ? EXIT_SUCCESS : EXIT_FAILURE;
}
