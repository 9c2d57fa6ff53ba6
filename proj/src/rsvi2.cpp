#include "riskrl/rsvi2.hpp"

#include <cmath>
#include <limits>

#include "riskrl/errors.hpp"

namespace riskrl {

using nlohmann::json;

std::string_view to_string(ReplayMode mode) {
    return mode == ReplayMode::tally ? "tally" : "full";
}

ReplayMode replay_mode_from_string(std::string_view name) {
    if (name == "tally") return ReplayMode::tally;
    if (name == "full") return ReplayMode::full;
    throw ConfigError("unknown replay mode \"" + std::string(name) + "\" (expected tally or full)");
}

Rsvi2Agent::Rsvi2Agent(MdpShape shape, long episodes, double beta, BonusConfig bonus, ReplayMode replay)
    : shape_(shape), episodes_(episodes), bonus_(bonus), replay_(replay) {
    if (shape.horizon < 1 || shape.num_states < 1 || shape.num_actions < 1) {
        throw ConfigError("rsvi2: invalid shape");
    }
    if (episodes < 1) throw ConfigError("rsvi2: number of episodes K must be >= 1");
    check_agent_beta(beta, shape.horizon);
    check_bonus_config(bonus);
    iota_ = confidence_log(shape.horizon, shape.num_states, shape.num_actions, episodes, bonus.delta);
    est_ = ExponentialEstimates(shape, beta);
    reward_.assign(est_.g_table().size(), std::numeric_limits<double>::quiet_NaN());
    if (replay_ == ReplayMode::tally) {
        next_tally_.assign(est_.g_table().size() * shape.num_states, 0);
    } else {
        replay_buffer_.resize(shape.horizon);
    }
}

double Rsvi2Agent::bonus(int h, long n) const {
    return bonus_.c * bonus_multiplier(bonus_, est_.beta(), shape_.horizon, h) *
           std::sqrt(shape_.num_states * iota_ / static_cast<double>(n));
}

DeterministicPolicy Rsvi2Agent::begin_episode(long k) {
    if (k < 1) throw ConfigError("episode index must be >= 1");
    plan();
    return est_.greedy_policy();
}

void Rsvi2Agent::plan() {
    const auto [H, S, A] = shape_;
    const double beta = est_.beta();
    std::vector<double> sums(static_cast<std::size_t>(S) * A);
    std::vector<double> next_exp(S);

    for (int h = H - 1; h >= 0; --h) {
        // e^{beta V_{h+1}(s')}, rebuilt from the freshly updated layer
        for (int sp = 0; sp < S; ++sp) next_exp[sp] = std::exp(beta * est_.v(h + 1, sp));

        std::fill(sums.begin(), sums.end(), 0.0);
        if (replay_ == ReplayMode::full) {
            for (const Transition& t : replay_buffer_[h]) {
                sums[static_cast<std::size_t>(t.s) * A + t.a] +=
                    std::exp(beta * (t.reward + est_.v(h + 1, t.next_state)));
            }
        } else {
            for (int s = 0; s < S; ++s) {
                for (int a = 0; a < A; ++a) {
                    if (est_.count(h, s, a) == 0) continue;
                    const long* tally = next_tally_.data() + sa(h, s, a) * S;
                    double acc = 0.0;
                    for (int sp = 0; sp < S; ++sp) {
                        if (tally[sp] > 0) acc += static_cast<double>(tally[sp]) * next_exp[sp];
                    }
                    sums[static_cast<std::size_t>(s) * A + a] = std::exp(beta * reward_[sa(h, s, a)]) * acc;
                }
            }
        }

        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const long n = est_.count(h, s, a);
                double g = est_.cap(h);
                if (n > 0) {
                    const double w = sums[static_cast<std::size_t>(s) * A + a] / static_cast<double>(n);
                    const double b = bonus(h, n);
                    g = est_.clip(h, beta > 0.0 ? w + b : w - b);
                }
                est_.g(h, s, a) = g;
                if (!est_.in_range(h, g)) ++range_violations_;
            }
            est_.refresh_value(h, s);
        }
    }
}

void Rsvi2Agent::observe(const Transition& t) {
    const auto [H, S, A] = shape_;
    if (t.h < 0 || t.h >= H || t.s < 0 || t.s >= S || t.a < 0 || t.a >= A || t.next_state < 0 ||
        t.next_state >= S) {
        throw ConfigError("rsvi2: transition index out of range");
    }
    const std::size_t i = sa(t.h, t.s, t.a);
    reward_[i] = t.reward;
    ++est_.count(t.h, t.s, t.a);
    if (replay_ == ReplayMode::tally) {
        ++next_tally_[i * S + t.next_state];
    } else {
        replay_buffer_[t.h].push_back(t);
    }
}

long Rsvi2Agent::stored_transitions(int h) const {
    if (replay_ == ReplayMode::full) return static_cast<long>(replay_buffer_[h].size());
    long total = 0;
    const std::size_t begin = sa(h, 0, 0) * shape_.num_states;
    const std::size_t end = begin + static_cast<std::size_t>(shape_.num_states) * shape_.num_actions * shape_.num_states;
    for (std::size_t i = begin; i < end; ++i) total += next_tally_[i];
    return total;
}

json Rsvi2Agent::checkpoint() const {
    json rewards = json::array();
    for (double r : reward_) rewards.push_back(std::isnan(r) ? json(nullptr) : json(r));
    json doc{{"algorithm", "rsvi2"},
             {"shape", {{"H", shape_.horizon}, {"S", shape_.num_states}, {"A", shape_.num_actions}}},
             {"episodes", episodes_},
             {"beta", est_.beta()},
             {"bonus", to_json(bonus_)},
             {"replay", std::string(to_string(replay_))},
             {"counts", est_.counts()},
             {"G", est_.g_table()},
             {"V", est_.v_table()},
             {"rewards", std::move(rewards)},
             {"range_violations", range_violations_}};
    if (replay_ == ReplayMode::tally) {
        doc["tally"] = next_tally_;
    } else {
        json buffer = json::array();
        for (const auto& step : replay_buffer_) {
            for (const Transition& t : step) buffer.push_back({t.h, t.s, t.a, t.reward, t.next_state});
        }
        doc["replay_buffer"] = std::move(buffer);
    }
    return doc;
}

Rsvi2Agent Rsvi2Agent::from_checkpoint(const json& doc) {
    try {
        if (doc.at("algorithm") != "rsvi2") throw ConfigError("checkpoint is not an rsvi2 agent");
        const json& sh = doc.at("shape");
        const MdpShape shape{sh.at("H").get<int>(), sh.at("S").get<int>(), sh.at("A").get<int>()};
        Rsvi2Agent agent(shape, doc.at("episodes").get<long>(), doc.at("beta").get<double>(),
                         bonus_config_from_json(doc.at("bonus")),
                         replay_mode_from_string(doc.at("replay").get<std::string>()));
        auto load = [](const json& src, auto& dst, const char* name) {
            auto values = src.get<std::remove_reference_t<decltype(dst)>>();
            if (values.size() != dst.size()) throw ConfigError(std::string("checkpoint: wrong size for ") + name);
            dst = std::move(values);
        };
        load(doc.at("counts"), agent.est_.counts(), "counts");
        load(doc.at("G"), agent.est_.g_table(), "G");
        load(doc.at("V"), agent.est_.v_table(), "V");
        const json& rewards = doc.at("rewards");
        if (rewards.size() != agent.reward_.size()) throw ConfigError("checkpoint: wrong size for rewards");
        for (std::size_t i = 0; i < rewards.size(); ++i) {
            agent.reward_[i] = rewards[i].is_null() ? std::numeric_limits<double>::quiet_NaN()
                                                    : rewards[i].get<double>();
        }
        agent.range_violations_ = doc.value("range_violations", 0L);
        if (agent.replay_ == ReplayMode::tally) {
            load(doc.at("tally"), agent.next_tally_, "tally");
        } else {
            for (const json& t : doc.at("replay_buffer")) {
                const Transition tr{t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<int>(),
                                    t.at(3).get<double>(), t.at(4).get<int>()};
                agent.replay_buffer_.at(tr.h).push_back(tr);
            }
        }
        return agent;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("rsvi2 checkpoint: ") + e.what());
    }
}

} // namespace riskrl
