#pragma once

#include <cstdint>
#include <vector>

#include "riskrl/mdp.hpp"

namespace riskrl {

// Random instance family: every kernel row drawn from a symmetric
// Dirichlet(dirichlet_alpha), rewards uniform on [0,1]. Pure function of
// its arguments.
TabularMdp make_random_mdp(int num_states, int num_actions, int horizon, std::uint64_t seed,
                           double dirichlet_alpha = 1.0);

// Exploration stress test with a bandit at the first step.
//
// Four states: 0 is the start, 1 ("high") pays 1 per step, 2 ("low") pays
// 0 and 3 ("mid") pays a constant in (0,1); all but the start absorb. Every
// arm pays 0 at step one. The designated arm is a long shot: it reaches
// "high" with a small probability and "low" otherwise. Every other arm goes
// to "mid", whose reward is solved so that at risk parameter beta the
// designated arm's entropic value exceeds the others' by exactly `gap`.
// One unlucky sample of the designated arm therefore makes it look worst.
// The designated arm is drawn from `seed`.
//
// best_success sets the long shot's success probability; 0 selects
// kDefaultBestSuccess, falling back to a best-arm value of (H-1+gap)/2
// when that probability cannot carry the gap (strongly risk-averse beta).
inline constexpr double kDefaultBestSuccess = 0.05;

struct BanditHardInstance {
    TabularMdp mdp;
    int best_arm;
    double arm_value;       // entropic value of each non-designated arm
    double best_arm_value;  // arm_value + gap
};

BanditHardInstance make_bandit_hard_instance(int num_actions, int horizon, double gap,
                                             std::uint64_t seed, double beta, double best_success = 0.0);

// Deterministic chain: state h at step h moves to h+1 under every action
// and pays step_rewards[h]. S = H + 1.
TabularMdp make_chain_mdp(const std::vector<double>& step_rewards, int num_actions = 1);

} // namespace riskrl
