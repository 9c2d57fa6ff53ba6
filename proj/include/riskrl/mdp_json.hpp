#pragma once

#include <filesystem>

#include <json.hpp>

#include "riskrl/mdp.hpp"

namespace riskrl {

// Document layout:
//   {"H":int,"S":int,"A":int,"initial_state":int,
//    "transitions":[h][s][a][s'], "rewards":[h][s][a]}
nlohmann::json to_json(const TabularMdp& mdp);

// Structural parse only; throws ConfigError on missing keys or ragged
// arrays. Use validate() or the TabularMdp constructor for the model checks.
MdpTables tables_from_json(const nlohmann::json& doc);

TabularMdp mdp_from_json(const nlohmann::json& doc);
TabularMdp load_mdp(const std::filesystem::path& path);

nlohmann::json to_json(const DeterministicPolicy& policy);

} // namespace riskrl
