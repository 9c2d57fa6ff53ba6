#include "riskrl/harness.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <thread>

#include "riskrl/errors.hpp"
#include "riskrl/risk_oracle.hpp"

namespace riskrl {

EpisodeResult run_episode(const TabularMdp& mdp, Agent& agent, Rng& rng, long k) {
    const int horizon = mdp.shape().horizon;
    EpisodeResult result;
    result.policy = agent.begin_episode(k);
    const int s1 = mdp.tables().initial_state;
    result.value_estimate = agent.value_estimate(s1);

    Trajectory& traj = result.trajectory;
    traj.states.reserve(horizon + 1);
    traj.actions.reserve(horizon);
    traj.rewards.reserve(horizon);
    traj.states.push_back(s1);
    int s = s1;
    for (int h = 0; h < horizon; ++h) {
        const int a = agent.act(h, s);
        if (a != result.policy.at(h, s)) {
            throw std::logic_error("agent deviated from its episode snapshot at h=" + std::to_string(h + 1));
        }
        const StepResult out = step(mdp, h, s, a, rng);
        agent.observe(Transition{h, s, a, out.reward, out.next_state});
        traj.actions.push_back(a);
        traj.rewards.push_back(out.reward);
        traj.states.push_back(out.next_state);
        s = out.next_state;
    }
    return result;
}

double regret_surrogate(double beta, int horizon, double v_learner, double v_policy) {
    if (beta > 0.0) return (std::exp(beta * v_learner) - std::exp(beta * v_policy)) / beta;
    return std::exp(-beta * horizon) / -beta * (std::exp(beta * v_policy) - std::exp(beta * v_learner));
}

long default_record_every(long episodes) { return episodes <= 10000 ? 1 : 10; }

void check_run_settings(const RunSettings& settings) {
    if (settings.episodes < 1) throw ConfigError("K must be at least 1");
    if (settings.seeds.empty()) throw ConfigError("seeds must be nonempty");
    if (settings.record_every < 1 || settings.record_every > settings.episodes) {
        throw ConfigError("record_every must lie in [1, K]");
    }
}

namespace {

SeedTrace run_seed(const TabularMdp& mdp, const AgentSpec& spec, const RunSettings& settings, double v_star,
                   std::uint64_t label) {
    Rng rng(stream_seed(settings.master_seed, label));
    auto agent = make_agent(spec, mdp, settings.episodes);
    const int horizon = mdp.shape().horizon;
    const double beta = spec.risk.beta;

    SeedTrace trace;
    trace.seed = label;
    trace.points.reserve(static_cast<std::size_t>(settings.episodes / settings.record_every));
    trace.min_instant_regret = std::numeric_limits<double>::infinity();

    DeterministicPolicy last_policy;
    double last_v_pi = 0.0;
    double cum = 0.0;
    for (long k = 1; k <= settings.episodes; ++k) {
        EpisodeResult ep = run_episode(mdp, *agent, rng, k);
        if (k == 1 || !(ep.policy == last_policy)) {
            last_v_pi = regret_terms(mdp, ep.policy, spec.risk, v_star).v_pi;
            last_policy = std::move(ep.policy);
        }
        const double instant = v_star - last_v_pi;
        cum += instant;
        const double surrogate = regret_surrogate(beta, horizon, ep.value_estimate, last_v_pi);
        const bool optimistic = ep.value_estimate >= v_star - kOptimismTolerance;
        if (optimistic) {
            ++trace.optimistic_episodes;
            ++trace.surrogate_checks;
            if (surrogate < instant - kSurrogateTolerance) ++trace.surrogate_violations;
        }
        if (instant < -kNegativeRegretTolerance) ++trace.negative_regret_episodes;
        trace.min_instant_regret = std::min(trace.min_instant_regret, instant);
        if (k % settings.record_every == 0) trace.points.push_back({k, instant, cum, surrogate, optimistic});
    }
    trace.final_cum_regret = cum;
    trace.range_violations = agent->range_violations();
    return trace;
}

} // namespace

RegretTrace run_experiment(const TabularMdp& mdp, const AgentSpec& spec, const RunSettings& settings,
                           int threads) {
    check_run_settings(settings);
    check_risk_params(spec.risk, mdp.shape().horizon);
    const auto started = std::chrono::steady_clock::now();

    RegretTrace trace;
    trace.agent_id = spec.id;
    trace.beta = spec.risk.beta;
    trace.episodes = settings.episodes;
    trace.record_every = settings.record_every;
    const ValueTables star = optimal_values(mdp, spec.risk);
    trace.v_star = star.v(0, mdp.tables().initial_state);
    // Surfaces configuration errors before any worker starts.
    make_agent(spec, mdp, settings.episodes);

    const std::size_t n = settings.seeds.size();
    trace.seeds.resize(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                trace.seeds[i] = run_seed(mdp, spec, settings, trace.v_star, settings.seeds[i]);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    trace.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return trace;
}

double RegretTrace::mean_final_cum_regret() const {
    if (seeds.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& s : seeds) sum += s.final_cum_regret;
    return sum / static_cast<double>(seeds.size());
}

double RegretTrace::std_final_cum_regret() const {
    if (seeds.size() < 2) return 0.0;
    const double mean = mean_final_cum_regret();
    double ss = 0.0;
    for (const auto& s : seeds) ss += (s.final_cum_regret - mean) * (s.final_cum_regret - mean);
    return std::sqrt(ss / static_cast<double>(seeds.size() - 1));
}

long RegretTrace::surrogate_violations() const {
    long total = 0;
    for (const auto& s : seeds) total += s.surrogate_violations;
    return total;
}

long RegretTrace::range_violations() const {
    long total = 0;
    for (const auto& s : seeds) total += s.range_violations;
    return total;
}

double RegretTrace::optimism_fraction() const {
    if (seeds.empty()) return 0.0;
    long hits = 0;
    for (const auto& s : seeds) hits += s.always_optimistic(episodes) ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(seeds.size());
}

GrowthFit fit_log_log_slope(const std::vector<double>& ks, const std::vector<double>& values) {
    if (ks.size() != values.size()) return {false, 0.0, "length mismatch"};
    std::vector<double> x, y;
    for (std::size_t i = 0; i < ks.size(); ++i) {
        if (!(values[i] > 0.0)) return {false, 0.0, "zero regret in window"};
        x.push_back(std::log(ks[i]));
        y.push_back(std::log(values[i]));
    }
    if (x.size() < 2) return {false, 0.0, "degenerate window"};
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / x.size();
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / y.size();
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
    }
    if (sxx <= 0.0) return {false, 0.0, "degenerate window"};
    return {true, sxy / sxx, ""};
}

GrowthFit fit_growth_exponent(const RegretTrace& trace, long k_lo, long k_hi) {
    if (k_lo < 1 || k_hi <= k_lo) return {false, 0.0, "degenerate window"};
    if (trace.seeds.empty()) return {false, 0.0, "empty trace"};
    double total = 0.0;
    for (const auto& seed : trace.seeds) {
        std::vector<double> ks, values;
        for (const auto& p : seed.points) {
            if (p.k < k_lo || p.k > k_hi) continue;
            ks.push_back(static_cast<double>(p.k));
            values.push_back(p.cum_regret);
        }
        const GrowthFit fit = fit_log_log_slope(ks, values);
        if (!fit.ok) return fit;
        total += fit.slope;
    }
    return {true, total / static_cast<double>(trace.seeds.size()), ""};
}

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

void write_trace_csv(std::ostream& out, const RegretTrace& trace) {
    out << "seed,k,instant_regret,cum_regret,surrogate\n";
    for (const auto& seed : trace.seeds) {
        for (const auto& p : seed.points) {
            out << seed.seed << ',' << p.k << ',' << format_double(p.instant_regret) << ','
                << format_double(p.cum_regret) << ',' << format_double(p.surrogate) << '\n';
        }
    }
}

void write_comparison_csv(std::ostream& out, const std::vector<RegretTrace>& traces) {
    if (traces.empty()) return;
    const RegretTrace& first = traces.front();
    for (const auto& t : traces) {
        bool aligned = t.seeds.size() == first.seeds.size();
        for (std::size_t i = 0; aligned && i < t.seeds.size(); ++i) {
            aligned = t.seeds[i].seed == first.seeds[i].seed &&
                      t.seeds[i].points.size() == first.seeds[i].points.size();
        }
        if (!aligned) throw std::logic_error("comparison traces do not share seeds and episodes");
    }
    out << "seed,k";
    for (const auto& t : traces) out << ',' << t.agent_id;
    out << '\n';
    for (std::size_t i = 0; i < first.seeds.size(); ++i) {
        for (std::size_t j = 0; j < first.seeds[i].points.size(); ++j) {
            out << first.seeds[i].seed << ',' << first.seeds[i].points[j].k;
            for (const auto& t : traces) out << ',' << format_double(t.seeds[i].points[j].cum_regret);
            out << '\n';
        }
    }
}

} // namespace riskrl
