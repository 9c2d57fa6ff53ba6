#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "riskrl/mdp.hpp"

namespace riskrl {

struct Transition {
    int h = 0;
    int s = 0;
    int a = 0;
    double reward = 0.0;
    int next_state = 0;
};

// Online learner driven by the harness:
//   policy = begin_episode(k); then per step a = act(h, s), observe(...).
// The policy returned by begin_episode is the one the episode follows.
class Agent {
public:
    virtual ~Agent() = default;

    virtual std::string_view algorithm() const = 0;
    virtual DeterministicPolicy begin_episode(long k) = 0;
    virtual int act(int h, int s) const = 0;
    virtual void observe(const Transition& t) = 0;

    // Learner's own estimate of V_1(s) for the episode in progress.
    virtual double value_estimate(int s) const = 0;

    // Number of exponential-domain entries found outside their admissible
    // range after an update.
    virtual long range_violations() const { return 0; }

    virtual nlohmann::json checkpoint() const = 0;
};

// Agents work on e^{beta V}; rejects |beta| < kMinAgentBeta (1/beta
// amplifies rounding there) and |beta| (H+1) above the overflow budget.
inline constexpr double kMinAgentBeta = 1e-6;
void check_agent_beta(double beta, int horizon);

// Relative slack on the range check, absorbing one or two roundings in
// the convex combinations.
inline constexpr double kRangeSlack = 1e-12;

// Optimistic exponential-domain estimates shared by RSVI2 and RSQ2:
// G_h(s,a) approximates e^{beta Q_h(s,a)}, V_h(s) = max_a (1/beta) log G_h(s,a).
class ExponentialEstimates {
public:
    ExponentialEstimates() = default;
    ExponentialEstimates(MdpShape shape, double beta);

    const MdpShape& shape() const { return shape_; }
    double beta() const { return beta_; }

    // e^{beta (H-h+1)} in one-based terms: the exponential of the largest
    // return still collectable from zero-based step h.
    double cap(int h) const { return caps_[h]; }

    double& g(int h, int s, int a) { return g_[q_index(h, s, a)]; }
    double g(int h, int s, int a) const { return g_[q_index(h, s, a)]; }
    std::span<const double> g_row(int h, int s) const;

    double v(int h, int s) const { return v_[v_index(h, s)]; }
    void set_v(int h, int s, double value) { v_[v_index(h, s)] = value; }

    long count(int h, int s, int a) const { return n_[q_index(h, s, a)]; }
    long& count(int h, int s, int a) { return n_[q_index(h, s, a)]; }

    // Projection onto [.., cap] for beta > 0 and [cap, ..] for beta < 0.
    double clip(int h, double value) const {
        return beta_ > 0.0 ? std::min(value, caps_[h]) : std::max(value, caps_[h]);
    }

    // V_h(s) <- max_a (1/beta) log G_h(s,a)
    void refresh_value(int h, int s);

    bool in_range(int h, double g) const;

    int greedy(int h, int s) const;
    DeterministicPolicy greedy_policy() const;

    std::vector<double>& g_table() { return g_; }
    const std::vector<double>& g_table() const { return g_; }
    std::vector<double>& v_table() { return v_; }
    const std::vector<double>& v_table() const { return v_; }
    std::vector<long>& counts() { return n_; }
    const std::vector<long>& counts() const { return n_; }

    std::size_t q_index(int h, int s, int a) const {
        return (static_cast<std::size_t>(h) * shape_.num_states + s) * shape_.num_actions + a;
    }
    std::size_t v_index(int h, int s) const {
        return static_cast<std::size_t>(h) * shape_.num_states + s;
    }

private:
    MdpShape shape_;
    double beta_ = 1.0;
    std::vector<double> caps_;
    std::vector<double> g_;
    std::vector<double> v_;  // H+1 layers, the last is identically 0
    std::vector<long> n_;
};

} // namespace riskrl
