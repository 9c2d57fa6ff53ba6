#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "riskrl/agent_factory.hpp"
#include "riskrl/harness.hpp"
#include "riskrl/mdp.hpp"
#include "riskrl/risk_oracle.hpp"

namespace riskrl {

// Reads and parses a JSON file; ConfigError naming the path on failure.
nlohmann::json load_json_file(const std::filesystem::path& path);

// Applies "dot.path=value". Numeric components index arrays, missing
// object members are created, and the value is parsed as JSON when
// possible and kept as a string otherwise.
void apply_override(nlohmann::json& doc, std::string_view assignment);

// An MDP description is one of
//   {"generator": "random", "S", "A", "H", "seed", "dirichlet_alpha"}
//   {"generator": "bandit_hard", "A", "H", "gap", "seed", "beta", "best_success"}
//   {"generator": "chain", "rewards": [...], "A"}
//   {"file": "path"}               relative to base_dir
//   {"inline": {...}} or the model document itself
TabularMdp build_mdp(const nlohmann::json& spec, const std::filesystem::path& base_dir = {});

// Canonical form of an MDP description: file references become absolute,
// generator defaults are filled in.
nlohmann::json normalize_mdp_spec(const nlohmann::json& spec, const std::filesystem::path& base_dir = {});

struct ExperimentConfig {
    nlohmann::json mdp;  // normalized MDP description
    std::vector<AgentSpec> agents;
    RunSettings run;
    long window_lo = 1;  // growth-exponent window
    long window_hi = 1;

    friend bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);
};

// "agents" may be a single object or an array. "seeds" may be a list or a
// count n meaning 0..n-1.
ExperimentConfig experiment_config_from_json(const nlohmann::json& doc,
                                             const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const ExperimentConfig& config);

// Reads RISKRL_SEED, if set, into master_seed.
void apply_seed_environment(ExperimentConfig& config);

struct SolveConfig {
    nlohmann::json mdp;
    std::vector<double> betas;
    NumericMode numeric_mode = NumericMode::direct;
    double overflow_budget = kDefaultOverflowBudget;
};

SolveConfig solve_config_from_json(const nlohmann::json& doc, const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const SolveConfig& config);

// FNV-1a of the compact dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& doc);

} // namespace riskrl
