#include "riskrl/agent_factory.hpp"

#include <set>

#include "riskrl/baselines.hpp"
#include "riskrl/errors.hpp"

namespace riskrl {

using nlohmann::json;

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
    case Algorithm::rsvi2: return "rsvi2";
    case Algorithm::rsq2: return "rsq2";
    case Algorithm::risk_neutral_q: return "risk_neutral_q";
    case Algorithm::oracle_greedy: return "oracle_greedy";
    }
    return "?";
}

namespace {

void reject_unknown_keys(const json& doc, std::initializer_list<const char*> known, const std::string& where) {
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : doc.items()) {
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
    }
}

RiskParams risk_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("agent risk must be a JSON object");
    reject_unknown_keys(doc, {"beta", "numeric_mode", "overflow_budget"}, "risk");
    RiskParams risk;
    risk.beta = doc.value("beta", risk.beta);
    risk.overflow_budget = doc.value("overflow_budget", risk.overflow_budget);
    if (doc.contains("numeric_mode")) {
        risk.numeric_mode = numeric_mode_from_string(doc.at("numeric_mode").get<std::string>());
    }
    if (!std::isfinite(risk.beta) || risk.beta == 0.0) throw ConfigError("risk.beta must be nonzero");
    return risk;
}

} // namespace

AgentSpec agent_spec_from_json(const json& doc) {
    if (!doc.is_object()) throw ConfigError("agent spec must be a JSON object");
    reject_unknown_keys(doc, {"id", "algorithm", "bonus", "risk", "replay", "rsq2_init"}, "agent");
    AgentSpec spec;
    try {
        const std::string algorithm = doc.value("algorithm", std::string("rsvi2"));
        bool force_fixed = false;
        if (algorithm == "rsvi2") {
            spec.algorithm = Algorithm::rsvi2;
        } else if (algorithm == "rsq2") {
            spec.algorithm = Algorithm::rsq2;
        } else if (algorithm == "risk_neutral_q") {
            spec.algorithm = Algorithm::risk_neutral_q;
        } else if (algorithm == "oracle_greedy") {
            spec.algorithm = Algorithm::oracle_greedy;
        } else if (algorithm == "fixed_bonus_rsvi") {
            spec.algorithm = Algorithm::rsvi2;
            force_fixed = true;
        } else if (algorithm == "fixed_bonus_rsq") {
            spec.algorithm = Algorithm::rsq2;
            force_fixed = true;
        } else {
            throw ConfigError("unknown algorithm \"" + algorithm + "\"");
        }
        spec.id = doc.value("id", algorithm);
        if (doc.contains("bonus")) spec.bonus = bonus_config_from_json(doc.at("bonus"));
        if (force_fixed) spec.bonus.style = BonusStyle::fixed_multiplier;
        if (doc.contains("risk")) spec.risk = risk_from_json(doc.at("risk"));
        if (doc.contains("replay")) spec.replay = replay_mode_from_string(doc.at("replay").get<std::string>());
        if (doc.contains("rsq2_init")) {
            spec.rsq2_init = rsq2_init_from_string(doc.at("rsq2_init").get<std::string>());
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("agent spec: ") + e.what());
    }
    if (spec.id.empty()) throw ConfigError("agent id must not be empty");
    return spec;
}

json to_json(const AgentSpec& spec) {
    json doc{{"id", spec.id},
             {"algorithm", std::string(to_string(spec.algorithm))},
             {"bonus", to_json(spec.bonus)},
             {"risk",
              {{"beta", spec.risk.beta},
               {"numeric_mode", std::string(to_string(spec.risk.numeric_mode))},
               {"overflow_budget", spec.risk.overflow_budget}}}};
    if (spec.algorithm == Algorithm::rsvi2) doc["replay"] = std::string(to_string(spec.replay));
    if (spec.algorithm == Algorithm::rsq2) doc["rsq2_init"] = std::string(to_string(spec.rsq2_init));
    return doc;
}

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const TabularMdp& mdp, long episodes) {
    switch (spec.algorithm) {
    case Algorithm::rsvi2:
        return std::make_unique<Rsvi2Agent>(mdp.shape(), episodes, spec.risk.beta, spec.bonus, spec.replay);
    case Algorithm::rsq2:
        return std::make_unique<Rsq2Agent>(mdp.shape(), episodes, spec.risk.beta, spec.bonus, spec.rsq2_init);
    case Algorithm::risk_neutral_q:
        return std::make_unique<RiskNeutralQAgent>(mdp.shape(), episodes, spec.bonus);
    case Algorithm::oracle_greedy:
        return std::make_unique<OracleGreedyAgent>(mdp, spec.risk);
    }
    throw ConfigError("unknown algorithm");
}

} // namespace riskrl
