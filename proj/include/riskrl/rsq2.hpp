#pragma once

#include "riskrl/agent.hpp"
#include "riskrl/bonus.hpp"
#include "riskrl/learning_rate.hpp"

namespace riskrl {

// Initial estimates for unvisited pairs.
enum class Rsq2Init {
    optimistic,  // G_h = e^{beta(H-h+1)}, V_h = H-h+1 for either sign of beta
    literal,     // as printed in the pseudocode: V_h = Q_h = 0 (G_h = 1) when beta < 0
};

std::string_view to_string(Rsq2Init init);
Rsq2Init rsq2_init_from_string(std::string_view name);

// Risk-sensitive Q-learning with doubly decaying bonus. On visit t of (h,s,a):
//   alpha_t = (H+1)/(H+t)
//   b_{h,t} = c |e^{beta(H-h+1)} - 1| sqrt(H iota / t)
//   w = (1 - alpha_t) G_h(s,a) + alpha_t e^{beta [r + V_{h+1}(s')]}
//   G_h(s,a) = min(w + alpha_t b, e^{beta(H-h+1)})   (beta > 0)
//              max(w - alpha_t b, e^{beta(H-h+1)})   (beta < 0)
//   V_h(s) = max_a (1/beta) log G_h(s,a)
class Rsq2Agent final : public Agent {
public:
    Rsq2Agent(MdpShape shape, long episodes, double beta, BonusConfig bonus,
              Rsq2Init init = Rsq2Init::optimistic);

    std::string_view algorithm() const override { return "rsq2"; }
    DeterministicPolicy begin_episode(long k) override;
    int act(int h, int s) const override { return est_.greedy(h, s); }
    void observe(const Transition& t) override { step(t); }
    double value_estimate(int s) const override { return est_.v(0, s); }
    long range_violations() const override { return range_violations_; }
    nlohmann::json checkpoint() const override;

    static Rsq2Agent from_checkpoint(const nlohmann::json& doc);

    // One update from an observed transition.
    void step(const Transition& t);

    // b_{h,t} for visit number t >= 1 (before the alpha_t factor).
    double bonus(int h, long t) const;

    const ExponentialEstimates& estimates() const { return est_; }
    const LearningRateTable& learning_rate() const { return rates_; }

private:
    MdpShape shape_;
    long episodes_;
    BonusConfig bonus_;
    Rsq2Init init_;
    double iota_;
    LearningRateTable rates_;
    ExponentialEstimates est_;
    long range_violations_ = 0;
};

} // namespace riskrl
