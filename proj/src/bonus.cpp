#include "riskrl/bonus.hpp"

#include <cmath>

#include "riskrl/errors.hpp"

namespace riskrl {

std::string_view to_string(BonusStyle style) {
    switch (style) {
    case BonusStyle::doubly_decaying: return "doubly_decaying";
    case BonusStyle::fixed_multiplier: return "fixed_multiplier";
    case BonusStyle::zero: return "zero";
    }
    return "?";
}

BonusStyle bonus_style_from_string(std::string_view name) {
    if (name == "doubly_decaying" || name == "doubly-decaying") return BonusStyle::doubly_decaying;
    if (name == "fixed_multiplier" || name == "fixed-multiplier") return BonusStyle::fixed_multiplier;
    if (name == "zero") return BonusStyle::zero;
    throw ConfigError("unknown bonus style \"" + std::string(name) + "\"");
}

void check_bonus_config(const BonusConfig& bonus) {
    if (!(bonus.c > 0.0) || !std::isfinite(bonus.c)) throw ConfigError("bonus constant c must be > 0");
    if (!(bonus.delta > 0.0 && bonus.delta <= 1.0)) throw ConfigError("bonus delta must lie in (0,1]");
}

double bonus_multiplier(const BonusConfig& bonus, double beta, int horizon, int h) {
    switch (bonus.style) {
    case BonusStyle::doubly_decaying: return std::abs(std::expm1(beta * (horizon - h)));
    case BonusStyle::fixed_multiplier: return std::abs(std::expm1(beta * horizon));
    case BonusStyle::zero: return 0.0;
    }
    return 0.0;
}

double confidence_log(int horizon, int num_states, int num_actions, long episodes, double delta) {
    return std::log(static_cast<double>(horizon) * num_states * num_actions * static_cast<double>(episodes) /
                    delta);
}

nlohmann::json to_json(const BonusConfig& bonus) {
    return {{"c", bonus.c}, {"delta", bonus.delta}, {"style", std::string(to_string(bonus.style))}};
}

BonusConfig bonus_config_from_json(const nlohmann::json& doc) {
    BonusConfig out;
    if (!doc.is_object()) throw ConfigError("bonus must be a JSON object");
    try {
        out.c = doc.value("c", out.c);
        out.delta = doc.value("delta", out.delta);
        if (doc.contains("style")) out.style = bonus_style_from_string(doc.at("style").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("bonus: ") + e.what());
    }
    check_bonus_config(out);
    return out;
}

} // namespace riskrl
