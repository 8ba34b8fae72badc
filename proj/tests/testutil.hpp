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

#ifndef HOUSETRADE_TESTS_TESTUTIL_HPP
#define HOUSETRADE_TESTS_TESTUTIL_HPP

#include <vector>

#include "housetrade/model.hpp"

namespace testutil {

inline housetrade::StrictOrder<housetrade::HouseId> houses(std::vector<int> v)
{
    housetrade::StrictOrder<housetrade::HouseId> o;
    for (int x : v) {
        o.ranking.push_back(housetrade::HouseId{x});
    }
    return o;
}

inline housetrade::StrictOrder<housetrade::AgentId> agents(std::vector<int> v)
{
    housetrade::StrictOrder<housetrade::AgentId> o;
    for (int x : v) {
        o.ranking.push_back(housetrade::AgentId{x});
    }
    return o;
}

inline housetrade::WeakOrder<housetrade::AgentId> agent_classes(std::vector<std::vector<int>> classes)
{
    housetrade::WeakOrder<housetrade::AgentId> w;
    for (auto& cls : classes) {
        std::vector<housetrade::AgentId> c;
        for (int x : cls) {
            c.push_back(housetrade::AgentId{x});
        }
        w.classes.push_back(std::move(c));
    }
    return w;
}

inline housetrade::WeakOrder<housetrade::HouseId> house_classes(std::vector<std::vector<int>> classes)
{
    housetrade::WeakOrder<housetrade::HouseId> w;
    for (auto& cls : classes) {
        std::vector<housetrade::HouseId> c;
        for (int x : cls) {
            c.push_back(housetrade::HouseId{x});
        }
        w.classes.push_back(std::move(c));
    }
    return w;
}

inline housetrade::LexPreference dlex(std::vector<int> demand, std::vector<int> supply)
{
    return housetrade::LexPreference::demand_lex(
        houses(std::move(demand)),
        housetrade::WeakOrder<housetrade::AgentId>::from_strict(agents(std::move(supply))));
}

inline housetrade::LexPreference slex(std::vector<int> supply, std::vector<int> demand)
{
    return housetrade::LexPreference::supply_lex(
        agents(std::move(supply)),
        housetrade::WeakOrder<housetrade::HouseId>::from_strict(houses(std::move(demand))));
}

inline housetrade::Allocation alloc(std::vector<int> houses_by_agent)
{
    return housetrade::Allocation(std::move(houses_by_agent));
}

inline housetrade::Allotment lot(int house, int recipient)
{
    return housetrade::Allotment{housetrade::HouseId{house}, housetrade::AgentId{recipient}};
}

}  // namespace testutil

#endif  // HOUSETRADE_TESTS_TESTUTIL_HPP
