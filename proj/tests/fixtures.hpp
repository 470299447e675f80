#pragma once

#include <string>

#include "normal/normal.hpp"

namespace fixture {

inline constexpr const char *kToyPlanCsv = "k,r,s,beta\n1,2,5,0.4\n2,3,5,0.35\n";

inline normal::SequencePlan toy_plan(std::size_t horizon = 6) { return normal::parse_toy_plan_csv(kToyPlanCsv, horizon); }

inline normal::Schedule toy_schedule() {
    std::vector<normal::Integer> values;
    for (int v = 10; v <= 130; v += 20) {
        values.emplace_back(v);
    }
    return normal::Schedule::toy(values);
}

inline normal::ConstructionState toy_state() { return normal::initial_state(toy_plan(), toy_schedule()); }

inline normal::SierpinskiParams toy_params(unsigned base = 2) {
    normal::SierpinskiParams p;
    p.base = base;
    p.caps.k_cap = 3;
    p.caps.q_cap = 3;
    p.caps.m_cap = 3;
    p.caps.n_base = 4;
    p.caps.n_cap = 10;
    return p;
}

} // namespace fixture
