#include "riskrl/rsq2.hpp"

#include <algorithm>
#include <cmath>

#include "riskrl/errors.hpp"

namespace riskrl {

using nlohmann::json;

std::string_view to_string(Rsq2Init init) {
    return init == Rsq2Init::optimistic ? "optimistic" : "literal";
}

Rsq2Init rsq2_init_from_string(std::string_view name) {
    if (name == "optimistic") return Rsq2Init::optimistic;
    if (name == "literal") return Rsq2Init::literal;
    throw ConfigError("unknown rsq2 init \"" + std::string(name) + "\" (expected optimistic or literal)");
}

Rsq2Agent::Rsq2Agent(MdpShape shape, long episodes, double beta, BonusConfig bonus, Rsq2Init init)
    : shape_(shape), episodes_(episodes), bonus_(bonus), init_(init), rates_(std::max(shape.horizon, 1)) {
    if (shape.horizon < 1 || shape.num_states < 1 || shape.num_actions < 1) {
        throw ConfigError("rsq2: invalid shape");
    }
    if (episodes < 1) throw ConfigError("rsq2: number of episodes K must be >= 1");
    check_agent_beta(beta, shape.horizon);
    check_bonus_config(bonus);
    iota_ = confidence_log(shape.horizon, shape.num_states, shape.num_actions, episodes, bonus.delta);
    est_ = ExponentialEstimates(shape, beta);
    if (init_ == Rsq2Init::literal && beta < 0.0) {
        std::fill(est_.g_table().begin(), est_.g_table().end(), 1.0);
        std::fill(est_.v_table().begin(), est_.v_table().end(), 0.0);
    }
}

double Rsq2Agent::bonus(int h, long t) const {
    return bonus_.c * bonus_multiplier(bonus_, est_.beta(), shape_.horizon, h) *
           std::sqrt(shape_.horizon * iota_ / static_cast<double>(t));
}

DeterministicPolicy Rsq2Agent::begin_episode(long k) {
    if (k < 1) throw ConfigError("episode index must be >= 1");
    return est_.greedy_policy();
}

void Rsq2Agent::step(const Transition& tr) {
    const auto [H, S, A] = shape_;
    if (tr.h < 0 || tr.h >= H || tr.s < 0 || tr.s >= S || tr.a < 0 || tr.a >= A || tr.next_state < 0 ||
        tr.next_state >= S) {
        throw ConfigError("rsq2: transition index out of range");
    }
    const double beta = est_.beta();
    const long t = ++est_.count(tr.h, tr.s, tr.a);
    const double alpha = rates_.alpha(t);
    const double b = bonus(tr.h, t);
    const double target = std::exp(beta * (tr.reward + est_.v(tr.h + 1, tr.next_state)));
    const double w = (1.0 - alpha) * est_.g(tr.h, tr.s, tr.a) + alpha * target;
    const double g = est_.clip(tr.h, beta > 0.0 ? w + alpha * b : w - alpha * b);
    est_.g(tr.h, tr.s, tr.a) = g;
    if (!est_.in_range(tr.h, g)) ++range_violations_;
    est_.refresh_value(tr.h, tr.s);
}

json Rsq2Agent::checkpoint() const {
    return json{{"algorithm", "rsq2"},
                {"shape", {{"H", shape_.horizon}, {"S", shape_.num_states}, {"A", shape_.num_actions}}},
                {"episodes", episodes_},
                {"beta", est_.beta()},
                {"bonus", to_json(bonus_)},
                {"init", std::string(to_string(init_))},
                {"counts", est_.counts()},
                {"G", est_.g_table()},
                {"V", est_.v_table()},
                {"range_violations", range_violations_}};
}

Rsq2Agent Rsq2Agent::from_checkpoint(const json& doc) {
    try {
        if (doc.at("algorithm") != "rsq2") throw ConfigError("checkpoint is not an rsq2 agent");
        const json& sh = doc.at("shape");
        const MdpShape shape{sh.at("H").get<int>(), sh.at("S").get<int>(), sh.at("A").get<int>()};
        Rsq2Agent agent(shape, doc.at("episodes").get<long>(), doc.at("beta").get<double>(),
                        bonus_config_from_json(doc.at("bonus")),
                        rsq2_init_from_string(doc.at("init").get<std::string>()));
        auto counts = doc.at("counts").get<std::vector<long>>();
        auto g = doc.at("G").get<std::vector<double>>();
        auto v = doc.at("V").get<std::vector<double>>();
        if (counts.size() != agent.est_.counts().size() || g.size() != agent.est_.g_table().size() ||
            v.size() != agent.est_.v_table().size()) {
            throw ConfigError("rsq2 checkpoint: table sizes do not match the shape");
        }
        agent.est_.counts() = std::move(counts);
        agent.est_.g_table() = std::move(g);
        agent.est_.v_table() = std::move(v);
        agent.range_violations_ = doc.value("range_violations", 0L);
        return agent;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("rsq2 checkpoint: ") + e.what());
    }
}

} // namespace riskrl
