#pragma once

#include <memory>
#include <string>

#include <json.hpp>

#include "riskrl/agent.hpp"
#include "riskrl/bonus.hpp"
#include "riskrl/risk_oracle.hpp"
#include "riskrl/rsq2.hpp"
#include "riskrl/rsvi2.hpp"

namespace riskrl {

enum class Algorithm { rsvi2, rsq2, risk_neutral_q, oracle_greedy };

std::string_view to_string(Algorithm algorithm);

struct AgentSpec {
    std::string id;
    Algorithm algorithm = Algorithm::rsvi2;
    BonusConfig bonus;
    RiskParams risk;  // beta drives the learner and the regret evaluation
    ReplayMode replay = ReplayMode::full;
    Rsq2Init rsq2_init = Rsq2Init::optimistic;
};

// Accepts the aliases fixed_bonus_rsvi / fixed_bonus_rsq, which map to
// rsvi2 / rsq2 with the fixed-multiplier bonus. Unknown keys are errors.
AgentSpec agent_spec_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const AgentSpec& spec);

std::unique_ptr<Agent> make_agent(const AgentSpec& spec, const TabularMdp& mdp, long episodes);

} // namespace riskrl
