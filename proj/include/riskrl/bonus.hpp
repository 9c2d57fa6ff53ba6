#pragma once

#include <string_view>

#include <json.hpp>

namespace riskrl {

enum class BonusStyle {
    doubly_decaying,   // multiplier |e^{beta(H-h+1)} - 1|, shrinks along the horizon
    fixed_multiplier,  // multiplier |e^{beta H} - 1| at every step
    zero,              // no exploration bonus
};

std::string_view to_string(BonusStyle style);
BonusStyle bonus_style_from_string(std::string_view name);

struct BonusConfig {
    double c = 1.0;
    double delta = 0.1;
    BonusStyle style = BonusStyle::doubly_decaying;
};

void check_bonus_config(const BonusConfig& bonus);

// Multiplier in front of the count factor at zero-based step h.
double bonus_multiplier(const BonusConfig& bonus, double beta, int horizon, int h);

// iota = log(H S A K / delta)
double confidence_log(int horizon, int num_states, int num_actions, long episodes, double delta);

nlohmann::json to_json(const BonusConfig& bonus);
BonusConfig bonus_config_from_json(const nlohmann::json& doc);

} // namespace riskrl
