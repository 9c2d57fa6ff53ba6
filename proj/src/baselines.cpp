#include "riskrl/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "riskrl/errors.hpp"
#include "riskrl/greedy.hpp"
#include "riskrl/mdp_json.hpp"
#include "riskrl/rsq2.hpp"
#include "riskrl/rsvi2.hpp"

namespace riskrl {

using nlohmann::json;

RiskNeutralQAgent::RiskNeutralQAgent(MdpShape shape, long episodes, BonusConfig bonus)
    : shape_(shape), episodes_(episodes), bonus_(bonus), rates_(std::max(shape.horizon, 1)) {
    const auto [H, S, A] = shape;
    if (H < 1 || S < 1 || A < 1) throw ConfigError("risk_neutral_q: invalid shape");
    if (episodes < 1) throw ConfigError("risk_neutral_q: number of episodes K must be >= 1");
    check_bonus_config(bonus);
    iota_ = confidence_log(H, S, A, episodes, bonus.delta);
    q_.resize(static_cast<std::size_t>(H) * S * A);
    n_.assign(q_.size(), 0);
    v_.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) q_[index(h, s, a)] = H - h;
            v_[static_cast<std::size_t>(h) * S + s] = H - h;
        }
    }
}

DeterministicPolicy RiskNeutralQAgent::begin_episode(long k) {
    if (k < 1) throw ConfigError("episode index must be >= 1");
    DeterministicPolicy policy(shape_.horizon, shape_.num_states);
    for (int h = 0; h < shape_.horizon; ++h) {
        for (int s = 0; s < shape_.num_states; ++s) policy.at(h, s) = act(h, s);
    }
    return policy;
}

int RiskNeutralQAgent::act(int h, int s) const {
    return argmax_action({q_.data() + index(h, s, 0), static_cast<std::size_t>(shape_.num_actions)});
}

void RiskNeutralQAgent::observe(const Transition& tr) {
    const auto [H, S, A] = shape_;
    if (tr.h < 0 || tr.h >= H || tr.s < 0 || tr.s >= S || tr.a < 0 || tr.a >= A || tr.next_state < 0 ||
        tr.next_state >= S) {
        throw ConfigError("risk_neutral_q: transition index out of range");
    }
    const std::size_t i = index(tr.h, tr.s, tr.a);
    const long t = ++n_[i];
    const double alpha = rates_.alpha(t);
    const double b = bonus_.style == BonusStyle::zero
                         ? 0.0
                         : bonus_.c * H * std::sqrt(H * iota_ / static_cast<double>(t));
    const double target = tr.reward + v_[static_cast<std::size_t>(tr.h + 1) * S + tr.next_state] + b;
    q_[i] = std::min((1.0 - alpha) * q_[i] + alpha * target, static_cast<double>(H - tr.h));
    v_[static_cast<std::size_t>(tr.h) * S + tr.s] = q_[index(tr.h, tr.s, act(tr.h, tr.s))];
}

json RiskNeutralQAgent::checkpoint() const {
    return json{{"algorithm", "risk_neutral_q"},
                {"shape", {{"H", shape_.horizon}, {"S", shape_.num_states}, {"A", shape_.num_actions}}},
                {"episodes", episodes_},
                {"bonus", to_json(bonus_)},
                {"counts", n_},
                {"Q", q_},
                {"V", v_}};
}

OracleGreedyAgent::OracleGreedyAgent(const TabularMdp& mdp, const RiskParams& params)
    : values_(optimal_values(mdp, params)), policy_(greedy_policy(values_)) {}

json OracleGreedyAgent::checkpoint() const {
    return json{{"algorithm", "oracle_greedy"}, {"beta", values_.beta}, {"policy", to_json(policy_)}};
}

std::unique_ptr<Agent> make_baseline(BaselineStyle style, MdpShape shape, long episodes, double beta,
                                     BonusConfig bonus) {
    switch (style) {
    case BaselineStyle::risk_neutral_q:
        return std::make_unique<RiskNeutralQAgent>(shape, episodes, bonus);
    case BaselineStyle::fixed_bonus_rsvi:
        bonus.style = BonusStyle::fixed_multiplier;
        return std::make_unique<Rsvi2Agent>(shape, episodes, beta, bonus);
    case BaselineStyle::fixed_bonus_rsq:
        bonus.style = BonusStyle::fixed_multiplier;
        return std::make_unique<Rsq2Agent>(shape, episodes, beta, bonus);
    }
    throw ConfigError("unknown baseline style");
}

} // namespace riskrl
