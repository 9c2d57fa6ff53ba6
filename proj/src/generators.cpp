#include "riskrl/generators.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "riskrl/errors.hpp"

namespace riskrl {

TabularMdp make_random_mdp(int num_states, int num_actions, int horizon, std::uint64_t seed,
                           double dirichlet_alpha) {
    if (num_states < 1 || num_actions < 1 || horizon < 1) {
        throw ConfigError("make_random_mdp: S, A and H must all be >= 1");
    }
    if (!(dirichlet_alpha > 0.0) || !std::isfinite(dirichlet_alpha)) {
        throw ConfigError("make_random_mdp: dirichlet_alpha must be a positive finite number");
    }
    const int S = num_states;
    MdpTables t;
    t.shape = {horizon, num_states, num_actions};
    t.initial_state = 0;
    const std::size_t rows = static_cast<std::size_t>(horizon) * S * num_actions;
    t.transitions.resize(rows * S);
    t.rewards.resize(rows);

    Rng rng(seed);
    std::gamma_distribution<double> gamma(dirichlet_alpha, 1.0);
    for (std::size_t i = 0; i < rows; ++i) {
        double* row = t.transitions.data() + i * S;
        double sum = 0.0;
        for (int sp = 0; sp < S; ++sp) {
            row[sp] = gamma(rng);
            sum += row[sp];
        }
        if (sum > 0.0) {
            for (int sp = 0; sp < S; ++sp) row[sp] /= sum;
        } else {
            // every gamma draw underflowed (tiny alpha): the Dirichlet limit is a vertex
            row[rng() % static_cast<std::uint64_t>(S)] = 1.0;
        }
        t.rewards[i] = uniform01(rng);
    }
    return TabularMdp(std::move(t));
}

BanditHardInstance make_bandit_hard_instance(int num_actions, int horizon, double gap,
                                             std::uint64_t seed, double beta, double best_success) {
    if (num_actions < 2) throw ConfigError("make_bandit_hard_instance: need at least 2 arms");
    if (horizon < 2) throw ConfigError("make_bandit_hard_instance: need H >= 2");
    if (!(gap > 0.0 && gap < 1.0)) throw ConfigError("make_bandit_hard_instance: gap must lie in (0,1)");
    if (beta == 0.0 || !std::isfinite(beta)) {
        throw ConfigError("make_bandit_hard_instance: beta must be a nonzero finite number");
    }
    if (best_success != 0.0 && !(best_success > 0.0 && best_success < 1.0)) {
        throw ConfigError("make_bandit_hard_instance: best_success must lie in (0,1)");
    }

    constexpr int kStart = 0, kHigh = 1, kLow = 2, kMid = 3, S = 4;
    const int H = horizon, A = num_actions;
    const double tail = H - 1;  // steps left after the first one

    // Entropic value of tail * Bernoulli(p) is (1/beta) log(1 + p (e^{beta tail} - 1)).
    const auto value_of = [&](double p) { return std::log1p(p * std::expm1(beta * tail)) / beta; };
    double p_best = best_success == 0.0 ? kDefaultBestSuccess : best_success;
    double best_value = value_of(p_best);
    if (!(best_value > gap)) {
        if (best_success != 0.0) {
            throw ConfigError("make_bandit_hard_instance: gap too large for the requested best_success");
        }
        best_value = 0.5 * (tail + gap);
        p_best = std::expm1(beta * best_value) / std::expm1(beta * tail);
    }
    const double arm_value = best_value - gap;
    const double mid_reward = arm_value / tail;

    Rng rng(seed);
    const int best_arm = static_cast<int>(rng() % static_cast<std::uint64_t>(A));

    MdpTables t;
    t.shape = {H, S, A};
    t.initial_state = kStart;
    t.transitions.assign(static_cast<std::size_t>(H) * S * A * S, 0.0);
    t.rewards.assign(static_cast<std::size_t>(H) * S * A, 0.0);
    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const std::size_t i = (static_cast<std::size_t>(h) * S + s) * A + a;
                double* row = t.transitions.data() + i * S;
                if (h == 0 && s == kStart && a == best_arm) {
                    row[kHigh] = p_best;
                    row[kLow] = 1.0 - p_best;
                } else if (h == 0 && s == kStart) {
                    row[kMid] = 1.0;
                } else {
                    row[s] = 1.0;
                }
                if (h > 0 && s == kHigh) t.rewards[i] = 1.0;
                if (h > 0 && s == kMid) t.rewards[i] = mid_reward;
            }
        }
    }
    return {TabularMdp(std::move(t)), best_arm, arm_value, best_value};
}

TabularMdp make_chain_mdp(const std::vector<double>& step_rewards, int num_actions) {
    const int H = static_cast<int>(step_rewards.size());
    if (H < 1 || num_actions < 1) throw ConfigError("make_chain_mdp: need H >= 1 and A >= 1");
    const int S = H + 1, A = num_actions;
    MdpTables t;
    t.shape = {H, S, A};
    t.initial_state = 0;
    t.transitions.assign(static_cast<std::size_t>(H) * S * A * S, 0.0);
    t.rewards.assign(static_cast<std::size_t>(H) * S * A, 0.0);
    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const std::size_t i = (static_cast<std::size_t>(h) * S + s) * A + a;
                t.transitions[i * S + std::min(s + 1, S - 1)] = 1.0;
                t.rewards[i] = step_rewards[h];
            }
        }
    }
    return TabularMdp(std::move(t));
}

} // namespace riskrl
