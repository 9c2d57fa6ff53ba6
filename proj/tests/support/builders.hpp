#pragma once

#include <vector>

#include "riskrl/mdp.hpp"

namespace build {

// Tables with every row a point mass on state 0 and zero rewards.
inline riskrl::MdpTables blank(int H, int S, int A) {
    riskrl::MdpTables t;
    t.shape = {H, S, A};
    t.initial_state = 0;
    t.transitions.assign(static_cast<std::size_t>(H) * S * A * S, 0.0);
    t.rewards.assign(static_cast<std::size_t>(H) * S * A, 0.0);
    for (std::size_t i = 0; i < t.rewards.size(); ++i) t.transitions[i * S] = 1.0;
    return t;
}

inline std::size_t sa(const riskrl::MdpTables& t, int h, int s, int a) {
    return (static_cast<std::size_t>(h) * t.shape.num_states + s) * t.shape.num_actions + a;
}

inline void set_row(riskrl::MdpTables& t, int h, int s, int a, const std::vector<double>& row) {
    const std::size_t base = sa(t, h, s, a) * t.shape.num_states;
    for (int sp = 0; sp < t.shape.num_states; ++sp) t.transitions[base + sp] = row[sp];
}

inline void set_reward(riskrl::MdpTables& t, int h, int s, int a, double r) { t.rewards[sa(t, h, s, a)] = r; }

// One decision step (H = 1) from state 0 into a next state drawn from `row`,
// paying `reward` at that step.
inline riskrl::TabularMdp one_step(const std::vector<double>& row, double reward) {
    auto t = blank(1, static_cast<int>(row.size()), 1);
    set_row(t, 0, 0, 0, row);
    set_reward(t, 0, 0, 0, reward);
    return riskrl::TabularMdp(std::move(t));
}

// H = 2 instance whose return is Bernoulli(1/2): step one moves to state 0
// or 1 with probability 1/2, step two pays the landing state's index.
inline riskrl::TabularMdp bernoulli_half() {
    auto t = blank(2, 2, 1);
    set_row(t, 0, 0, 0, {0.5, 0.5});
    set_row(t, 1, 0, 0, {1.0, 0.0});
    set_row(t, 1, 1, 0, {0.0, 1.0});
    set_reward(t, 1, 1, 0, 1.0);
    return riskrl::TabularMdp(std::move(t));
}

} // namespace build
