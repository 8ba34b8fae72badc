/**
 * \file housetrade/market_io.hpp
 *
 * \brief JSON market files and machine-readable reports. Strict order
 *        components are flat arrays, weak components are arrays of
 *        indifference classes, houses are named "h1".."hn", so files
 *        are self-describing.
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

#ifndef HOUSETRADE_MARKET_IO_HPP
#define HOUSETRADE_MARKET_IO_HPP

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "housetrade/audit.hpp"
#include "housetrade/model.hpp"
#include "housetrade/ttc.hpp"
#include "housetrade/verify.hpp"

namespace housetrade {

using json = nlohmann::ordered_json;

class MarketParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline std::string house_name(int house)
{
    return "h" + std::to_string(house);
}

inline int parse_house_name(const std::string& name)
{
    if (name.size() < 2 || name.front() != 'h' ||
        !std::all_of(name.begin() + 1, name.end(), [](unsigned char c) { return std::isdigit(c); })) {
        throw MarketParseError("malformed house name: \"" + name + "\" (expected \"h<index>\")");
    }
    return std::stoi(name.substr(1));
}

inline json allocation_to_json(const Allocation& a)
{
    json out = json::array();
    for (int agent = 1; agent <= a.size(); ++agent) {
        out.push_back(house_name(a.house_of_raw(agent)));
    }
    return out;
}

/// Comma-separated house names indexed by agent, e.g. "h2,h1,h3".
inline Allocation parse_allocation(const std::string& text, int n)
{
    std::vector<int> houses;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        item.erase(std::remove_if(item.begin(), item.end(), [](unsigned char c) { return std::isspace(c); }),
                   item.end());
        houses.push_back(parse_house_name(item));
    }
    if (static_cast<int>(houses.size()) != n) {
        throw MarketParseError("allocation lists " + std::to_string(houses.size()) + " houses, market has " +
                               std::to_string(n));
    }
    for (int h : houses) {
        if (h < 1 || h > n) {
            throw MarketParseError("allocation references house h" + std::to_string(h) +
                                   " outside the market");
        }
    }
    try {
        return Allocation(std::move(houses));
    } catch (const std::invalid_argument& e) {
        throw MarketParseError(std::string("malformed allocation: ") + e.what());
    }
}

namespace io_detail {

inline std::vector<int> parse_strict_houses(const json& node)
{
    if (!node.is_array()) {
        throw MarketParseError("strict demand component must be a flat array of house names");
    }
    std::vector<int> out;
    for (const auto& item : node) {
        if (!item.is_string()) {
            throw MarketParseError("strict demand component must contain house names");
        }
        out.push_back(parse_house_name(item.get<std::string>()));
    }
    return out;
}

inline std::vector<int> parse_strict_agents(const json& node)
{
    if (!node.is_array()) {
        throw MarketParseError("strict supply component must be a flat array of agent ids");
    }
    std::vector<int> out;
    for (const auto& item : node) {
        if (!item.is_number_integer()) {
            throw MarketParseError("strict supply component must contain agent ids");
        }
        out.push_back(item.get<int>());
    }
    return out;
}

inline std::vector<std::vector<int>> parse_weak_houses(const json& node)
{
    if (!node.is_array()) {
        throw MarketParseError("weak demand component must be an array of indifference classes");
    }
    std::vector<std::vector<int>> out;
    for (const auto& cls : node) {
        if (!cls.is_array()) {
            throw MarketParseError("weak demand component must be an array of arrays of house names");
        }
        std::vector<int> members;
        for (const auto& item : cls) {
            if (!item.is_string()) {
                throw MarketParseError("weak demand classes must contain house names");
            }
            members.push_back(parse_house_name(item.get<std::string>()));
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

inline std::vector<std::vector<int>> parse_weak_agents(const json& node)
{
    if (!node.is_array()) {
        throw MarketParseError("weak supply component must be an array of indifference classes");
    }
    std::vector<std::vector<int>> out;
    for (const auto& cls : node) {
        if (!cls.is_array()) {
            throw MarketParseError("weak supply component must be an array of arrays of agent ids");
        }
        std::vector<int> members;
        for (const auto& item : cls) {
            if (!item.is_number_integer()) {
                throw MarketParseError("weak supply classes must contain agent ids");
            }
            members.push_back(item.get<int>());
        }
        std::sort(members.begin(), members.end());
        out.push_back(std::move(members));
    }
    return out;
}

}  // namespace io_detail

/// Parses a market document and checks every type invariant; invalid
/// content is reported agent by agent.
inline Market parse_market(const json& doc)
{
    if (!doc.is_object() || !doc.contains("n") || !doc.contains("preferences")) {
        throw MarketParseError("market file must be an object with \"n\" and \"preferences\"");
    }
    if (!doc["n"].is_number_integer() || doc["n"].get<int>() < 1) {
        throw MarketParseError("\"n\" must be a positive integer");
    }
    const int n = doc["n"].get<int>();
    if (!doc["preferences"].is_array() || static_cast<int>(doc["preferences"].size()) != n) {
        throw MarketParseError("\"preferences\" must list exactly one entry per agent");
    }

    std::vector<LexPreference> prefs(static_cast<std::size_t>(n),
                                     LexPreference::unchecked(PrefKind::DemandLex, {}, {}, n));
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (const auto& entry : doc["preferences"]) {
        if (!entry.is_object() || !entry.contains("agent") || !entry.contains("kind") ||
            !entry.contains("demand") || !entry.contains("supply")) {
            throw MarketParseError("each preference needs \"agent\", \"kind\", \"demand\", and \"supply\"");
        }
        if (!entry["agent"].is_number_integer()) {
            throw MarketParseError("\"agent\" must be an integer");
        }
        const int agent = entry["agent"].get<int>();
        if (agent < 1 || agent > n) {
            throw MarketParseError("agent " + std::to_string(agent) + " outside 1.." + std::to_string(n));
        }
        if (seen[static_cast<std::size_t>(agent - 1)]) {
            throw MarketParseError("agent " + std::to_string(agent) + " appears twice");
        }
        seen[static_cast<std::size_t>(agent - 1)] = 1;
        const std::string kind = entry["kind"].get<std::string>();
        if (kind == "dlex") {
            prefs[static_cast<std::size_t>(agent - 1)] =
                LexPreference::unchecked(PrefKind::DemandLex, io_detail::parse_strict_houses(entry["demand"]),
                                         io_detail::parse_weak_agents(entry["supply"]), n);
        } else if (kind == "slex") {
            prefs[static_cast<std::size_t>(agent - 1)] =
                LexPreference::unchecked(PrefKind::SupplyLex, io_detail::parse_strict_agents(entry["supply"]),
                                         io_detail::parse_weak_houses(entry["demand"]), n);
        } else {
            throw MarketParseError("unknown preference kind: \"" + kind + "\"");
        }
    }

    Market market(n, std::move(prefs));
    const auto violations = validate_market(market);
    if (!violations.empty()) {
        std::string message = "invalid market:";
        for (const auto& v : violations) {
            message += " [agent " + std::to_string(v.agent.value) + ": " + v.message + "]";
        }
        throw MarketParseError(message);
    }
    return market;
}

inline Market load_market(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw MarketParseError("cannot open market file: " + path);
    }
    json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw MarketParseError("market file is not valid JSON: " + std::string(e.what()));
    }
    return parse_market(doc);
}

inline json market_to_json(const Market& m)
{
    json doc;
    doc["n"] = m.size();
    doc["preferences"] = json::array();
    for (int agent = 1; agent <= m.size(); ++agent) {
        const LexPreference& p = m.preference_raw(agent);
        json entry;
        entry["agent"] = agent;
        entry["kind"] = to_string(p.kind());
        if (p.kind() == PrefKind::DemandLex) {
            json demand = json::array();
            for (int h : p.strict_component()) {
                demand.push_back(house_name(h));
            }
            json supply = json::array();
            for (const auto& cls : p.weak_component()) {
                supply.push_back(cls);
            }
            entry["demand"] = std::move(demand);
            entry["supply"] = std::move(supply);
        } else {
            json demand = json::array();
            for (const auto& cls : p.weak_component()) {
                json names = json::array();
                for (int h : cls) {
                    names.push_back(house_name(h));
                }
                demand.push_back(std::move(names));
            }
            entry["demand"] = std::move(demand);
            entry["supply"] = p.strict_component();
        }
        doc["preferences"].push_back(std::move(entry));
    }
    return doc;
}

inline json allotment_to_json(const Allotment& lot)
{
    json out;
    out["house"] = house_name(lot.house.value);
    out["recipient"] = lot.recipient.value;
    return out;
}

inline json property_report_to_json(const PropertyReport& report)
{
    json out;
    out["property"] = to_string(report.property);
    out["holds"] = report.holds;
    if (report.witness) {
        json w;
        json agents = json::array();
        for (AgentId a : report.witness->agents) {
            agents.push_back(a.value);
        }
        w["agents"] = std::move(agents);
        if (report.witness->alternative) {
            w["allocation"] = allocation_to_json(*report.witness->alternative);
        }
        out["witness"] = std::move(w);
    }
    return out;
}

inline json domain_to_json(const DomainDescriptor& d)
{
    json out;
    out["n"] = d.n;
    out["kind"] = to_string(d.kind);
    out["preferences_per_agent"] = d.per_agent_count;
    out["profiles"] = d.profile_count();
    return out;
}

inline json audit_report_to_json(const RuleAuditReport& report)
{
    json out;
    out["audit"] = report.audit;
    out["rule"] = report.rule;
    out["domain"] = domain_to_json(report.domain);
    out["profiles_checked"] = report.profiles_checked;
    out["deviations_checked"] = report.deviations_checked;
    out["violation_count"] = report.violations.size();
    out["truncated"] = report.truncated;
    json violations = json::array();
    for (const auto& v : report.violations) {
        json item;
        item["profile"] = v.profile_index;
        item["agents"] = v.coalition;
        item["misreports"] = v.misreports;
        json truthful = json::array();
        for (const auto& lot : v.truthful) {
            truthful.push_back(allotment_to_json(lot));
        }
        json deviated = json::array();
        for (const auto& lot : v.deviated) {
            deviated.push_back(allotment_to_json(lot));
        }
        item["truthful"] = std::move(truthful);
        item["deviated"] = std::move(deviated);
        violations.push_back(std::move(item));
    }
    out["violations"] = std::move(violations);
    return out;
}

inline json property_audit_to_json(const PropertyAuditReport& report)
{
    json out;
    out["audit"] = "allocation_properties";
    out["rule"] = report.rule;
    out["domain"] = domain_to_json(report.domain);
    json properties = json::array();
    for (AllocationProperty p : report.properties) {
        properties.push_back(to_string(p));
    }
    out["properties"] = std::move(properties);
    out["profiles_checked"] = report.profiles_checked;
    out["failure_count"] = report.failures.size();
    json failures = json::array();
    for (const auto& f : report.failures) {
        json item;
        item["profile"] = f.profile_index;
        item["report"] = property_report_to_json(f.report);
        failures.push_back(std::move(item));
    }
    out["failures"] = std::move(failures);
    return out;
}

inline json csp_result_to_json(const CspResult& result)
{
    json out;
    out["status"] = result.status == CspResult::Status::RuleExists ? "rule_exists" : "impossible";
    json feasible = json::array();
    for (const auto& set : result.feasible) {
        json allocations = json::array();
        for (const Allocation& a : set) {
            allocations.push_back(allocation_to_json(a));
        }
        feasible.push_back(std::move(allocations));
    }
    out["feasible"] = std::move(feasible);
    json links = json::array();
    for (const CspLink& link : result.links) {
        json item;
        item["p"] = link.p;
        item["q"] = link.q;
        item["agent"] = link.agent;
        links.push_back(std::move(item));
    }
    out["links"] = std::move(links);
    if (result.status == CspResult::Status::RuleExists) {
        json assignment = json::array();
        for (const Allocation& a : result.assignment) {
            assignment.push_back(allocation_to_json(a));
        }
        out["assignment"] = std::move(assignment);
    }
    out["trace"] = result.trace;
    json stats;
    stats["nodes"] = result.stats.nodes;
    stats["constraint_checks"] = result.stats.constraint_checks;
    stats["feasible_product"] = result.stats.feasible_product;
    stats["profiles"] = result.stats.profiles;
    stats["links"] = result.stats.links;
    out["stats"] = std::move(stats);
    return out;
}

inline json impossibility_report_to_json(const ImpossibilityReport& report)
{
    json out;
    out["n"] = report.n;
    out["force_dlex"] = report.force_dlex;
    out["assertions"] = report.replay;
    out["csp"] = csp_result_to_json(report.csp);
    return out;
}

inline json trace_to_json(const TtcTrace& trace)
{
    json steps = json::array();
    for (const TtcStep& step : trace.steps) {
        json item;
        json agents = json::array();
        for (AgentId a : step.remaining_agents) {
            agents.push_back(a.value);
        }
        json houses = json::array();
        for (HouseId h : step.remaining_houses) {
            houses.push_back(house_name(h.value));
        }
        item["agents"] = std::move(agents);
        item["houses"] = std::move(houses);
        json pointing = json::array();
        for (const auto& [agent, house] : step.agent_points) {
            json edge;
            edge["agent"] = agent.value;
            edge["house"] = house_name(house.value);
            pointing.push_back(std::move(edge));
        }
        for (const auto& [house, agent] : step.house_points) {
            json edge;
            edge["house"] = house_name(house.value);
            edge["agent"] = agent.value;
            pointing.push_back(std::move(edge));
        }
        item["pointing"] = std::move(pointing);
        json cycles = json::array();
        for (const auto& cycle : step.cycles_removed) {
            json members = json::array();
            for (AgentId a : cycle) {
                members.push_back(a.value);
            }
            cycles.push_back(std::move(members));
        }
        item["cycles_removed"] = std::move(cycles);
        steps.push_back(std::move(item));
    }
    json out;
    out["steps"] = std::move(steps);
    return out;
}

}  // namespace housetrade

#endif  // HOUSETRADE_MARKET_IO_HPP
