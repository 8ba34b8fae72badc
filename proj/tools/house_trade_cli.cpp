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

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "housetrade/audit.hpp"
#include "housetrade/fixtures.hpp"
#include "housetrade/market_io.hpp"
#include "housetrade/ttc.hpp"
#include "housetrade/verify.hpp"

namespace {

using housetrade::json;

// 0 success / property holds; 1 negative verdict; 2 input error;
// 3 domain error; 4 bound exceeded; 5 expectation mismatch
constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kDomainError = 3;
constexpr int kBoundExceeded = 4;
constexpr int kMismatch = 5;

housetrade::BruteForceBounds effective_bounds()
{
    housetrade::BruteForceBounds bounds;
    if (const char* env = std::getenv("HOUSE_TRADE_BOUND")) {
        const int value = std::atoi(env);
        if (value < 1) {
            throw housetrade::MarketParseError("HOUSE_TRADE_BOUND must be a positive integer");
        }
        bounds.per_allocation = value;
        bounds.set_enumeration = value;
    }
    return bounds;
}

void emit(const json& report)
{
    std::cout << report.dump(2) << "\n";
}

int cmd_ttc(const std::string& path, bool with_trace)
{
    const housetrade::Market market = housetrade::load_market(path);
    json report;
    report["command"] = "ttc";
    report["market"] = path;
    const auto kind = market.uniform_kind();
    if (!kind) {
        throw housetrade::MixedDomainError();
    }
    report["kind"] = housetrade::to_string(*kind);
    if (with_trace) {
        const auto [allocation, trace] = housetrade::ttc_rule_with_trace(market);
        report["allocation"] = housetrade::allocation_to_json(allocation);
        report["trace"] = housetrade::trace_to_json(trace);
    } else {
        report["allocation"] = housetrade::allocation_to_json(housetrade::ttc_rule(market));
    }
    emit(report);
    return kOk;
}

int cmd_check(const std::string& path, const std::string& allocation_text, const std::string& property)
{
    const housetrade::Market market = housetrade::load_market(path);
    const housetrade::Allocation allocation = housetrade::parse_allocation(allocation_text, market.size());
    const housetrade::BruteForceBounds bounds = effective_bounds();

    std::vector<std::string> wanted;
    if (property == "all") {
        wanted = {"ir", "pareto", "pair", "stable", "pairwise", "core"};
    } else if (property == "ir" || property == "pareto" || property == "pair" || property == "stable" ||
               property == "pairwise" || property == "core") {
        wanted = {property};
    } else {
        throw housetrade::MarketParseError("unknown property: \"" + property + "\"");
    }

    json report;
    report["command"] = "check";
    report["market"] = path;
    report["allocation"] = housetrade::allocation_to_json(allocation);
    json reports = json::array();
    bool all_hold = true;
    for (const std::string& name : wanted) {
        housetrade::PropertyReport r;
        if (name == "ir") {
            r = housetrade::is_individually_rational(market, allocation);
        } else if (name == "pareto") {
            r = housetrade::is_pareto_efficient(market, allocation, bounds.per_allocation);
        } else if (name == "pair") {
            r = housetrade::is_pair_efficient(market, allocation);
        } else if (name == "stable") {
            r = housetrade::is_stable(market, allocation, bounds.per_allocation);
        } else if (name == "pairwise") {
            r = housetrade::is_pairwise_stable(market, allocation);
        } else {
            r = housetrade::in_strong_core(market, allocation, bounds.per_allocation);
        }
        all_hold = all_hold && r.holds;
        reports.push_back(housetrade::property_report_to_json(r));
    }
    report["reports"] = std::move(reports);
    report["all_hold"] = all_hold;
    emit(report);
    return all_hold ? kOk : kNegative;
}

int cmd_sets(const std::string& command, const std::string& path)
{
    const housetrade::Market market = housetrade::load_market(path);
    const housetrade::BruteForceBounds bounds = effective_bounds();
    const auto set = command == "core" ? housetrade::strong_core(market, bounds.set_enumeration)
                                       : housetrade::stable_set(market, bounds.set_enumeration);
    json report;
    report["command"] = command;
    report["market"] = path;
    report["count"] = set.size();
    json allocations = json::array();
    for (const auto& a : set) {
        allocations.push_back(housetrade::allocation_to_json(a));
    }
    report[command == "core" ? "strong_core" : "stable_set"] = std::move(allocations);
    emit(report);
    return kOk;
}

int cmd_audit(const std::string& rule_name, int n, const std::string& domain, bool group, int jobs)
{
    const housetrade::NamedRule rule = housetrade::rule_by_name(rule_name);
    const housetrade::DomainKind kind = housetrade::domain_kind_from_string(domain);
    const housetrade::RuleAuditReport audit =
        group ? housetrade::audit_group_strategy_proofness(rule, n, kind, 1000)
              : housetrade::audit_strategy_proofness(rule, n, kind, jobs);
    json report;
    report["command"] = "audit";
    report["group"] = group;
    report["report"] = housetrade::audit_report_to_json(audit);
    emit(report);
    return audit.violations.empty() ? kOk : kNegative;
}

// exit 0 when the impossibility holds; a rule existing on the family is
// reported with the mismatch code (expected under --force-dlex, an
// implementation bug otherwise)
int cmd_impossibility(int n, bool force_dlex)
{
    const housetrade::ImpossibilityReport result = housetrade::verify_impossibility_witness(n, force_dlex);
    json report;
    report["command"] = "impossibility";
    report["report"] = housetrade::impossibility_report_to_json(result);
    emit(report);
    return result.csp.status == housetrade::CspResult::Status::Impossible ? kOk : kMismatch;
}

struct ReproduceCheck {
    std::string name;
    bool pass = false;
    json expected;
    json actual;
};

void add_check(std::vector<ReproduceCheck>& checks, std::string name, json expected, json actual)
{
    ReproduceCheck c;
    c.name = std::move(name);
    c.pass = expected == actual;
    c.expected = std::move(expected);
    c.actual = std::move(actual);
    checks.push_back(std::move(c));
}

void reproduce_example1(std::vector<ReproduceCheck>& checks)
{
    namespace ht = housetrade;
    const ht::Market m = ht::fixtures::example1();
    add_check(checks, "example1: trading-cycles allocation", json::array({"h3", "h1", "h2"}),
              ht::allocation_to_json(ht::ttc_rule(m)));
    const ht::Allocation a = ht::parse_allocation("h1,h3,h2", 3);
    add_check(checks, "example1: (h1,h3,h2) is pair efficient", true, ht::is_pair_efficient(m, a).holds);
    const auto pairwise = ht::is_pairwise_stable(m, a);
    add_check(checks, "example1: (h1,h3,h2) is not pairwise stable", false, pairwise.holds);
    json witness;
    if (pairwise.witness) {
        witness["agents"] = json::array({pairwise.witness->agents[0].value, pairwise.witness->agents[1].value});
        witness["allocation"] = ht::allocation_to_json(*pairwise.witness->alternative);
    }
    json expected_witness;
    expected_witness["agents"] = json::array({1, 2});
    expected_witness["allocation"] = json::array({"h3", "h1", "h2"});
    add_check(checks, "example1: the pairwise-instability witness is agents {1,2} swapping to (h3,h1,h2)",
              expected_witness, witness);
    json stable = json::array();
    for (const auto& s : ht::stable_set(m)) {
        stable.push_back(ht::allocation_to_json(s));
    }
    add_check(checks, "example1: stable set", json::array({json::array({"h3", "h1", "h2"})}), stable);
}

void reproduce_example2(std::vector<ReproduceCheck>& checks)
{
    namespace ht = housetrade;
    const ht::Market m = ht::fixtures::example2();
    add_check(checks, "example2: trading-cycles allocation", json::array({"h2", "h1", "h3"}),
              ht::allocation_to_json(ht::ttc_rule(m)));
    json core = json::array();
    for (const auto& a : ht::strong_core(m)) {
        core.push_back(ht::allocation_to_json(a));
    }
    add_check(checks, "example2: strong core",
              json::array({json::array({"h2", "h1", "h3"}), json::array({"h2", "h3", "h1"})}), core);
    const ht::Allocation first = ht::parse_allocation("h2,h1,h3", 3);
    const ht::Allocation second = ht::parse_allocation("h2,h3,h1", 3);
    add_check(checks, "example2: agent 2 strictly prefers (h2,h1,h3) to (h2,h3,h1)", true,
              ht::strictly_prefers(m.preference(ht::AgentId{2}), ht::AgentId{2},
                                   ht::allotment_of(first, ht::AgentId{2}),
                                   ht::allotment_of(second, ht::AgentId{2})));
    add_check(checks, "example2: (h2,h1,h3) is stable", true, ht::is_stable(m, first).holds);
    add_check(checks, "example2: (h2,h3,h1) is stable", true, ht::is_stable(m, second).holds);
    const ht::Market embedded = ht::embed_shapley_scarf(ht::fixtures::example2_demand_profile());
    json embedded_core = json::array();
    for (const auto& a : ht::strong_core(embedded)) {
        embedded_core.push_back(ht::allocation_to_json(a));
    }
    add_check(checks, "example2: embedded market has the singleton strong core {(h2,h1,h3)}",
              json::array({json::array({"h2", "h1", "h3"})}), embedded_core);
}

void reproduce_theorem4(std::vector<ReproduceCheck>& checks)
{
    namespace ht = housetrade;
    for (int n : {3, 4}) {
        const auto report = ht::verify_impossibility_witness(n);
        add_check(checks, "impossibility scenario at n=" + std::to_string(n) + ": replay assertions hold",
                  true, report.assertions_hold);
        add_check(checks, "impossibility scenario at n=" + std::to_string(n) + ": no rule exists",
                  "impossible",
                  report.csp.status == ht::CspResult::Status::Impossible ? "impossible" : "rule_exists");
    }
}

void reproduce_richness(std::vector<ReproduceCheck>& checks)
{
    namespace ht = housetrade;
    const auto result = ht::richness_counterexample(ht::fixtures::example2_agent2_preference(),
                                                    ht::AgentId{2}, ht::Allotment{ht::HouseId{3}, ht::AgentId{1}});
    add_check(checks, "richness: no contour-preserving transform exists for agent 2's preference at (h3,1)",
              false, result.satisfiable);
    const auto sweep = ht::richness_sweep(3);
    add_check(checks, "richness: exhaustive sweep finds unsatisfiable instances", true,
              sweep.unsatisfiable >= 1);
    add_check(checks, "richness: sweep counts", json::array({36, 36}),
              json::array({sweep.satisfiable, sweep.unsatisfiable}));
}

int cmd_reproduce(bool all, int example, int theorem, bool richness)
{
    if (example != 0 && example != 1 && example != 2) {
        throw housetrade::MarketParseError("unknown example: " + std::to_string(example));
    }
    if (theorem != 0 && theorem != 4) {
        throw housetrade::MarketParseError("unknown theorem: " + std::to_string(theorem));
    }
    std::vector<ReproduceCheck> checks;
    const bool none_selected = !all && example == 0 && theorem == 0 && !richness;
    if (all || none_selected) {
        example = -1;
        theorem = 4;
        richness = true;
    }
    if (example == 1 || example == -1) {
        reproduce_example1(checks);
    }
    if (example == 2 || example == -1) {
        reproduce_example2(checks);
    }
    if (theorem == 4) {
        reproduce_theorem4(checks);
    }
    if (richness) {
        reproduce_richness(checks);
    }

    json report;
    report["command"] = "reproduce";
    int passed = 0;
    json items = json::array();
    for (const auto& c : checks) {
        json item;
        item["name"] = c.name;
        item["pass"] = c.pass;
        if (!c.pass) {
            item["expected"] = c.expected;
            item["actual"] = c.actual;
        }
        items.push_back(std::move(item));
        passed += c.pass ? 1 : 0;
    }
    report["checks"] = std::move(items);
    report["passed"] = passed;
    report["failed"] = static_cast<int>(checks.size()) - passed;
    emit(report);
    return passed == static_cast<int>(checks.size()) ? kOk : kMismatch;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"top trading cycles and exhaustive property verification for housing markets with"
                 " demand- and supply-lexicographic preferences"};
    app.require_subcommand(1);

    std::string market_path;
    bool with_trace = false;
    auto* ttc = app.add_subcommand("ttc", "run the trading-cycles rule on a market file");
    ttc->add_option("market", market_path, "market JSON file")->required();
    ttc->add_flag("--trace", with_trace, "include the per-step graphs and removed cycles");

    std::string check_allocation;
    std::string check_property = "all";
    auto* check = app.add_subcommand("check", "check allocation properties against a market");
    check->add_option("market", market_path, "market JSON file")->required();
    check->add_option("allocation", check_allocation, "allocation as comma-separated house names")->required();
    check->add_option("--property", check_property, "ir|pareto|pair|stable|pairwise|core|all");

    auto* core = app.add_subcommand("core", "enumerate the strong core of a market");
    core->add_option("market", market_path, "market JSON file")->required();

    auto* stable = app.add_subcommand("stable-set", "enumerate the stable allocations of a market");
    stable->add_option("market", market_path, "market JSON file")->required();

    std::string audit_rule = "ttc";
    std::string audit_domain = "dlex_strict";
    int audit_n = 3;
    bool audit_group = false;
    int audit_jobs = 1;
    auto* audit = app.add_subcommand("audit", "exhaustive strategy-proofness audit over a domain");
    audit->add_option("--rule", audit_rule, "ttc|broken-ttc|serial-dictatorship");
    audit->add_option("--n", audit_n, "market size");
    audit->add_option("--domain", audit_domain, "dlex_strict|dlex_weak_supply|slex_strict|slex_weak_demand");
    audit->add_flag("--group", audit_group, "audit coalitions and joint misreports");
    audit->add_option("--jobs", audit_jobs, "worker count for the profile sweep");

    int impossibility_n = 3;
    bool force_dlex = false;
    auto* impossibility = app.add_subcommand("impossibility", "verify the mixed-domain impossibility");
    impossibility->add_option("--n", impossibility_n, "market size (3 or larger, padded)");
    impossibility->add_flag("--force-dlex", force_dlex, "retag agent 3 as demand-lexicographic");

    bool reproduce_all = false;
    int reproduce_example = 0;
    int reproduce_theorem = 0;
    bool reproduce_richness_flag = false;
    auto* reproduce = app.add_subcommand("reproduce", "re-run the bundled scenarios against their expected results");
    reproduce->add_flag("--all", reproduce_all, "run every bundled scenario");
    reproduce->add_option("--example", reproduce_example, "bundled example number (1 or 2)");
    reproduce->add_option("--theorem", reproduce_theorem, "bundled theorem number (4)");
    reproduce->add_flag("--richness", reproduce_richness_flag, "run the domain-richness scenario");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInputError;
    }

    try {
        if (ttc->parsed()) {
            return cmd_ttc(market_path, with_trace);
        }
        if (check->parsed()) {
            return cmd_check(market_path, check_allocation, check_property);
        }
        if (core->parsed()) {
            return cmd_sets("core", market_path);
        }
        if (stable->parsed()) {
            return cmd_sets("stable-set", market_path);
        }
        if (audit->parsed()) {
            return cmd_audit(audit_rule, audit_n, audit_domain, audit_group, audit_jobs);
        }
        if (impossibility->parsed()) {
            return cmd_impossibility(impossibility_n, force_dlex);
        }
        if (reproduce->parsed()) {
            return cmd_reproduce(reproduce_all, reproduce_example, reproduce_theorem,
                                 reproduce_richness_flag);
        }
    } catch (const housetrade::MarketParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const housetrade::MixedDomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kDomainError;
    } catch (const housetrade::BoundExceededError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kBoundExceeded;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return kInputError;
}
