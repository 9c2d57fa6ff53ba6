#pragma once

#include <vector>

#include "riskrl/agent.hpp"
#include "riskrl/bonus.hpp"

namespace riskrl {

// How the per-step sample average w_h(s,a) is rebuilt every episode.
enum class ReplayMode {
    tally,  // counts per (h,s,a,s'); sum grouped by next state
    full,   // literal replay list, one term per stored transition
};

std::string_view to_string(ReplayMode mode);
ReplayMode replay_mode_from_string(std::string_view name);

// Risk-sensitive value iteration with doubly decaying bonus.
//
// Each episode replans backward from h = H to 1: for every visited (s,a)
//   w_h = mean over stored transitions of e^{beta [r + V_{h+1}(s')]}
//   b_h = c |e^{beta(H-h+1)} - 1| sqrt(S iota / N_h(s,a))
//   G_h = min(w_h + b_h, e^{beta(H-h+1)})   (beta > 0)
//         max(w_h - b_h, e^{beta(H-h+1)})   (beta < 0)
// with unvisited pairs left at e^{beta(H-h+1)}, then acts greedily on G.
// w_h is recomputed from scratch since V_{h+1} moves every episode.
class Rsvi2Agent final : public Agent {
public:
    Rsvi2Agent(MdpShape shape, long episodes, double beta, BonusConfig bonus,
               ReplayMode replay = ReplayMode::full);

    std::string_view algorithm() const override { return "rsvi2"; }
    DeterministicPolicy begin_episode(long k) override;
    int act(int h, int s) const override { return est_.greedy(h, s); }
    void observe(const Transition& t) override;
    double value_estimate(int s) const override { return est_.v(0, s); }
    long range_violations() const override { return range_violations_; }
    nlohmann::json checkpoint() const override;

    static Rsvi2Agent from_checkpoint(const nlohmann::json& doc);

    // Backward planning pass over all steps.
    void plan();

    // Bonus for step h at visit count n >= 1.
    double bonus(int h, long n) const;

    const ExponentialEstimates& estimates() const { return est_; }
    const BonusConfig& bonus_config() const { return bonus_; }
    ReplayMode replay_mode() const { return replay_; }
    long stored_transitions(int h) const;

private:
    std::size_t sa(int h, int s, int a) const { return est_.q_index(h, s, a); }

    MdpShape shape_;
    long episodes_;
    BonusConfig bonus_;
    ReplayMode replay_;
    double iota_;
    ExponentialEstimates est_;
    std::vector<double> reward_;         // r_h(s,a) once observed
    std::vector<long> next_tally_;       // [h][s][a][s'] (tally mode)
    std::vector<std::vector<Transition>> replay_buffer_;  // per h (full mode)
    long range_violations_ = 0;
};

} // namespace riskrl
