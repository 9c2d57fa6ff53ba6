#include "riskrl/agent.hpp"

#include <algorithm>
#include <sstream>

#include "riskrl/errors.hpp"
#include "riskrl/greedy.hpp"
#include "riskrl/risk_oracle.hpp"

namespace riskrl {

void check_agent_beta(double beta, int horizon) {
    if (!std::isfinite(beta) || std::abs(beta) < kMinAgentBeta) {
        std::ostringstream os;
        os << "beta = " << beta << " is too close to 0 for the exponential-domain learners (need |beta| >= "
           << kMinAgentBeta << "); use the risk_neutral_q baseline instead";
        throw ConfigError(os.str());
    }
    check_risk_params(RiskParams{beta, NumericMode::direct, kDefaultOverflowBudget}, horizon);
}

ExponentialEstimates::ExponentialEstimates(MdpShape shape, double beta)
    : shape_(shape), beta_(beta) {
    const auto [H, S, A] = shape;
    caps_.resize(H + 1);
    for (int h = 0; h <= H; ++h) caps_[h] = std::exp(beta * (H - h));
    g_.resize(static_cast<std::size_t>(H) * S * A);
    n_.assign(g_.size(), 0);
    v_.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) g(h, s, a) = caps_[h];
            set_v(h, s, H - h);
        }
    }
}

std::span<const double> ExponentialEstimates::g_row(int h, int s) const {
    return {g_.data() + q_index(h, s, 0), static_cast<std::size_t>(shape_.num_actions)};
}

void ExponentialEstimates::refresh_value(int h, int s) {
    const auto row = g_row(h, s);
    set_v(h, s, std::log(row[greedy_action(row, beta_)]) / beta_);
}

bool ExponentialEstimates::in_range(int h, double g) const {
    const double lo = std::min(1.0, caps_[h]);
    const double hi = std::max(1.0, caps_[h]);
    return g >= lo * (1.0 - kRangeSlack) && g <= hi * (1.0 + kRangeSlack);
}

int ExponentialEstimates::greedy(int h, int s) const {
    return greedy_action(g_row(h, s), beta_);
}

DeterministicPolicy ExponentialEstimates::greedy_policy() const {
    DeterministicPolicy policy(shape_.horizon, shape_.num_states);
    for (int h = 0; h < shape_.horizon; ++h) {
        for (int s = 0; s < shape_.num_states; ++s) policy.at(h, s) = greedy(h, s);
    }
    return policy;
}

} // namespace riskrl
