#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "riskrl/agent.hpp"
#include "riskrl/agent_factory.hpp"
#include "riskrl/mdp.hpp"
#include "riskrl/rng.hpp"

namespace riskrl {

// V^k_1(s_1) >= V*_1(s_1) - kOptimismTolerance counts as optimistic; the
// slack absorbs the rounding difference between the learner's log(G)/beta
// and the oracle's DP value on ties.
inline constexpr double kOptimismTolerance = 1e-10;
inline constexpr double kSurrogateTolerance = 1e-9;
inline constexpr double kNegativeRegretTolerance = 1e-10;

struct EpisodeResult {
    Trajectory trajectory;
    DeterministicPolicy policy;  // greedy snapshot taken before the first step
    double value_estimate = 0.0; // learner's V^k_1(s_1) at the same moment
};

// Plays one H-step episode from the initial state. Throws std::logic_error
// if the agent acts differently from its own snapshot.
EpisodeResult run_episode(const TabularMdp& mdp, Agent& agent, Rng& rng, long k);

// Upper bound on the instantaneous regret implied by optimism.
double regret_surrogate(double beta, int horizon, double v_learner, double v_policy);

struct RunSettings {
    long episodes = 1;
    std::vector<std::uint64_t> seeds{0};
    std::uint64_t master_seed = 0;
    long record_every = 1;
};

long default_record_every(long episodes);
void check_run_settings(const RunSettings& settings);

struct TracePoint {
    long k = 0;
    double instant_regret = 0.0;
    double cum_regret = 0.0;
    double surrogate = 0.0;
    bool optimistic = false;
};

struct SeedTrace {
    std::uint64_t seed = 0;
    std::vector<TracePoint> points;  // k = record_every, 2 record_every, ...
    double final_cum_regret = 0.0;
    long optimistic_episodes = 0;
    long surrogate_checks = 0;      // optimistic episodes, every one checked
    long surrogate_violations = 0;
    long negative_regret_episodes = 0;
    long range_violations = 0;
    double min_instant_regret = 0.0;

    bool always_optimistic(long episodes) const { return optimistic_episodes == episodes; }
};

struct RegretTrace {
    std::string agent_id;
    double beta = 1.0;
    double v_star = 0.0;
    long episodes = 0;
    long record_every = 1;
    std::vector<SeedTrace> seeds;  // in the order of RunSettings::seeds
    std::string config_hash;
    double wall_seconds = 0.0;

    double mean_final_cum_regret() const;
    double std_final_cum_regret() const;  // sample standard deviation
    long surrogate_violations() const;
    long range_violations() const;
    double optimism_fraction() const;     // share of seeds optimistic in every episode
};

// Seeds run on up to `threads` workers; each owns its agent and its rng,
// seeded with stream_seed(master_seed, seed), so the result does not depend
// on scheduling.
RegretTrace run_experiment(const TabularMdp& mdp, const AgentSpec& spec, const RunSettings& settings,
                           int threads = 1);

struct GrowthFit {
    bool ok = false;
    double slope = 0.0;
    std::string flag;  // reason when !ok
};

// Least-squares slope of log(cum regret) against log(k) over recorded
// k in [k_lo, k_hi], fitted per seed and averaged over seeds.
GrowthFit fit_growth_exponent(const RegretTrace& trace, long k_lo, long k_hi);
GrowthFit fit_log_log_slope(const std::vector<double>& ks, const std::vector<double>& values);

std::string format_double(double value);

void write_trace_csv(std::ostream& out, const RegretTrace& trace);

// Side-by-side cumulative regret, one column per agent. Traces must share
// seeds and recorded episodes.
void write_comparison_csv(std::ostream& out, const std::vector<RegretTrace>& traces);

} // namespace riskrl
