#pragma once

#include <memory>

#include "riskrl/agent.hpp"
#include "riskrl/bonus.hpp"
#include "riskrl/learning_rate.hpp"
#include "riskrl/risk_oracle.hpp"

namespace riskrl {

// Optimistic Q-learning on expected return, the beta -> 0 limit of RSQ2:
// additive updates with a bonus multiplier proportional to H,
//   Q_h(s,a) <- min((1-alpha_t) Q_h(s,a) + alpha_t [r + V_{h+1}(s') + c H sqrt(H iota / t)], H-h+1)
class RiskNeutralQAgent final : public Agent {
public:
    RiskNeutralQAgent(MdpShape shape, long episodes, BonusConfig bonus);

    std::string_view algorithm() const override { return "risk_neutral_q"; }
    DeterministicPolicy begin_episode(long k) override;
    int act(int h, int s) const override;
    void observe(const Transition& t) override;
    double value_estimate(int s) const override { return v_[s]; }
    nlohmann::json checkpoint() const override;

    double q(int h, int s, int a) const { return q_[index(h, s, a)]; }
    double v(int h, int s) const { return v_[static_cast<std::size_t>(h) * shape_.num_states + s]; }

private:
    std::size_t index(int h, int s, int a) const {
        return (static_cast<std::size_t>(h) * shape_.num_states + s) * shape_.num_actions + a;
    }

    MdpShape shape_;
    long episodes_;
    BonusConfig bonus_;
    double iota_;
    LearningRateTable rates_;
    std::vector<double> q_;
    std::vector<double> v_;
    std::vector<long> n_;
};

// Plays the exact optimal policy of the true model; zero regret reference.
class OracleGreedyAgent final : public Agent {
public:
    OracleGreedyAgent(const TabularMdp& mdp, const RiskParams& params);

    std::string_view algorithm() const override { return "oracle_greedy"; }
    DeterministicPolicy begin_episode(long) override { return policy_; }
    int act(int h, int s) const override { return policy_.at(h, s); }
    void observe(const Transition&) override {}
    double value_estimate(int s) const override { return values_.v(0, s); }
    nlohmann::json checkpoint() const override;

private:
    ValueTables values_;
    DeterministicPolicy policy_;
};

enum class BaselineStyle { risk_neutral_q, fixed_bonus_rsvi, fixed_bonus_rsq };

// fixed_bonus_* reuse RSVI2 / RSQ2 with the fixed-multiplier bonus.
std::unique_ptr<Agent> make_baseline(BaselineStyle style, MdpShape shape, long episodes, double beta,
                                     BonusConfig bonus);

} // namespace riskrl
