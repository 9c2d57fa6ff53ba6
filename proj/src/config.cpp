#include "riskrl/config.hpp"

#include <cstdlib>
#include <fstream>
#include <set>

#include "riskrl/errors.hpp"
#include "riskrl/generators.hpp"
#include "riskrl/mdp_json.hpp"

namespace riskrl {

using nlohmann::json;
namespace fs = std::filesystem;

json load_json_file(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("cannot parse " + path.string() + ": " + e.what());
    }
}

namespace {

bool is_index(std::string_view s) {
    return !s.empty() && s.find_first_not_of("0123456789") == std::string_view::npos;
}

template <class T>
T get_field(const json& doc, const char* key, const std::string& where) {
    if (!doc.contains(key)) throw ConfigError(where + ": missing \"" + key + "\"");
    try {
        return doc.at(key).get<T>();
    } catch (const json::exception&) {
        throw ConfigError(where + ": bad value for \"" + key + "\"");
    }
}

template <class T>
T get_field_or(const json& doc, const char* key, T fallback, const std::string& where) {
    if (!doc.contains(key)) return fallback;
    return get_field<T>(doc, key, where);
}

void reject_unknown(const json& doc, std::initializer_list<const char*> known, const std::string& where) {
    const std::set<std::string> allowed(known.begin(), known.end());
    for (const auto& [key, value] : doc.items()) {
        if (!allowed.contains(key)) throw ConfigError(where + ": unknown key \"" + key + "\"");
    }
}

} // namespace

void apply_override(json& doc, std::string_view assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ConfigError("override must look like key=value: " + std::string(assignment));
    }
    const std::string path(assignment.substr(0, eq));
    const std::string text(assignment.substr(eq + 1));
    json value = json::parse(text, nullptr, false);
    if (value.is_discarded()) value = text;

    json* node = &doc;
    std::size_t start = 0;
    while (true) {
        const auto dot = path.find('.', start);
        const std::string key = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (key.empty()) throw ConfigError("empty component in override path " + path);
        json* child = nullptr;
        if (node->is_array()) {
            if (!is_index(key)) throw ConfigError("override path " + path + ": \"" + key + "\" is not an index");
            const std::size_t i = std::stoul(key);
            if (i >= node->size()) throw ConfigError("override path " + path + ": index " + key + " out of range");
            child = &(*node)[i];
        } else {
            if (node->is_null()) *node = json::object();
            if (!node->is_object()) throw ConfigError("override path " + path + " descends into a scalar");
            child = &(*node)[key];
        }
        if (dot == std::string::npos) {
            *child = value;
            return;
        }
        node = child;
        start = dot + 1;
    }
}

json normalize_mdp_spec(const json& spec, const fs::path& base_dir) {
    const std::string where = "mdp";
    if (!spec.is_object()) throw ConfigError("mdp must be a JSON object");
    if (spec.contains("file")) {
        reject_unknown(spec, {"file"}, where);
        fs::path p = get_field<std::string>(spec, "file", where);
        if (p.is_relative()) p = base_dir / p;
        return json{{"file", fs::absolute(p).lexically_normal().string()}};
    }
    if (spec.contains("inline")) {
        reject_unknown(spec, {"inline"}, where);
        mdp_from_json(spec.at("inline"));
        return spec;
    }
    if (spec.contains("transitions")) {
        mdp_from_json(spec);
        return json{{"inline", spec}};
    }
    if (!spec.contains("generator")) throw ConfigError("mdp: missing \"generator\", \"file\" or \"inline\"");

    const auto generator = get_field<std::string>(spec, "generator", where);
    if (generator == "random") {
        reject_unknown(spec, {"generator", "S", "A", "H", "seed", "dirichlet_alpha"}, where);
        return json{{"generator", "random"},
                    {"S", get_field<int>(spec, "S", where)},
                    {"A", get_field<int>(spec, "A", where)},
                    {"H", get_field<int>(spec, "H", where)},
                    {"seed", get_field_or<std::uint64_t>(spec, "seed", 0, where)},
                    {"dirichlet_alpha", get_field_or<double>(spec, "dirichlet_alpha", 1.0, where)}};
    }
    if (generator == "bandit_hard") {
        reject_unknown(spec, {"generator", "A", "H", "gap", "seed", "beta", "best_success"}, where);
        return json{{"generator", "bandit_hard"},
                    {"A", get_field<int>(spec, "A", where)},
                    {"H", get_field<int>(spec, "H", where)},
                    {"gap", get_field_or<double>(spec, "gap", 0.2, where)},
                    {"seed", get_field_or<std::uint64_t>(spec, "seed", 0, where)},
                    {"beta", get_field_or<double>(spec, "beta", 1.0, where)},
                    {"best_success", get_field_or<double>(spec, "best_success", 0.0, where)}};
    }
    if (generator == "chain") {
        reject_unknown(spec, {"generator", "rewards", "A"}, where);
        return json{{"generator", "chain"},
                    {"rewards", get_field<std::vector<double>>(spec, "rewards", where)},
                    {"A", get_field_or<int>(spec, "A", 1, where)}};
    }
    throw ConfigError("mdp: unknown generator \"" + generator + "\"");
}

TabularMdp build_mdp(const json& spec, const fs::path& base_dir) {
    const json norm = normalize_mdp_spec(spec, base_dir);
    if (norm.contains("file")) return mdp_from_json(load_json_file(norm.at("file").get<std::string>()));
    if (norm.contains("inline")) return mdp_from_json(norm.at("inline"));
    const auto generator = norm.at("generator").get<std::string>();
    if (generator == "random") {
        const int s = norm.at("S"), a = norm.at("A"), h = norm.at("H");
        if (s < 1 || a < 1 || h < 1) throw ConfigError("mdp: S, A and H must be positive");
        return make_random_mdp(s, a, h, norm.at("seed").get<std::uint64_t>(), norm.at("dirichlet_alpha"));
    }
    if (generator == "bandit_hard") {
        return make_bandit_hard_instance(norm.at("A"), norm.at("H"), norm.at("gap"),
                                         norm.at("seed").get<std::uint64_t>(), norm.at("beta"),
                                         norm.at("best_success"))
            .mdp;
    }
    return make_chain_mdp(norm.at("rewards").get<std::vector<double>>(), norm.at("A"));
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    return to_json(a) == to_json(b);
}

ExperimentConfig experiment_config_from_json(const json& doc, const fs::path& base_dir) {
    const std::string where = "config";
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(doc, {"mdp", "agents", "K", "seeds", "master_seed", "record_every", "window"}, where);
    ExperimentConfig config;
    if (!doc.contains("mdp")) throw ConfigError("config: missing \"mdp\"");
    config.mdp = normalize_mdp_spec(doc.at("mdp"), base_dir);

    if (!doc.contains("agents")) throw ConfigError("config: missing \"agents\"");
    const json& agents = doc.at("agents");
    if (agents.is_array()) {
        for (const auto& a : agents) config.agents.push_back(agent_spec_from_json(a));
    } else {
        config.agents.push_back(agent_spec_from_json(agents));
    }
    if (config.agents.empty()) throw ConfigError("config: \"agents\" is empty");
    for (const auto& a : config.agents) {
        if (a.id.find_first_of(",/\\\n") != std::string::npos) {
            throw ConfigError("agent id \"" + a.id + "\" contains a reserved character");
        }
    }

    config.run.episodes = get_field<long>(doc, "K", where);
    if (doc.contains("seeds") && doc.at("seeds").is_number_integer()) {
        const long n = doc.at("seeds").get<long>();
        if (n < 1) throw ConfigError("config: seeds must be nonempty");
        config.run.seeds.clear();
        for (long i = 0; i < n; ++i) config.run.seeds.push_back(static_cast<std::uint64_t>(i));
    } else {
        config.run.seeds = get_field_or<std::vector<std::uint64_t>>(doc, "seeds", {0}, where);
    }
    config.run.master_seed = get_field_or<std::uint64_t>(doc, "master_seed", 0, where);
    config.run.record_every =
        get_field_or<long>(doc, "record_every", default_record_every(config.run.episodes), where);
    check_run_settings(config.run);

    const long k = config.run.episodes;
    std::vector<long> window{std::max(1L, k / 10), k};
    window = get_field_or<std::vector<long>>(doc, "window", window, where);
    if (window.size() != 2 || window[0] < 1 || window[1] < window[0] || window[1] > k) {
        throw ConfigError("config: window must be [k_lo, k_hi] with 1 <= k_lo <= k_hi <= K");
    }
    config.window_lo = window[0];
    config.window_hi = window[1];
    return config;
}

json to_json(const ExperimentConfig& config) {
    json agents = json::array();
    for (const auto& a : config.agents) agents.push_back(to_json(a));
    return json{{"mdp", config.mdp},
                {"agents", config.agents.size() == 1 ? agents.front() : agents},
                {"K", config.run.episodes},
                {"seeds", config.run.seeds},
                {"master_seed", config.run.master_seed},
                {"record_every", config.run.record_every},
                {"window", {config.window_lo, config.window_hi}}};
}

void apply_seed_environment(ExperimentConfig& config) {
    const char* env = std::getenv("RISKRL_SEED");
    if (env == nullptr || *env == '\0') return;
    try {
        std::size_t used = 0;
        const unsigned long long v = std::stoull(env, &used);
        if (used != std::string_view(env).size()) throw std::invalid_argument("trailing");
        config.run.master_seed = v;
    } catch (const std::exception&) {
        throw ConfigError(std::string("RISKRL_SEED is not an unsigned integer: ") + env);
    }
}

SolveConfig solve_config_from_json(const json& doc, const fs::path& base_dir) {
    const std::string where = "solve config";
    if (!doc.is_object()) throw ConfigError("config must be a JSON object");
    reject_unknown(doc, {"mdp", "betas", "numeric_mode", "overflow_budget"}, where);
    SolveConfig config;
    if (!doc.contains("mdp")) throw ConfigError("solve config: missing \"mdp\"");
    config.mdp = normalize_mdp_spec(doc.at("mdp"), base_dir);
    config.betas = get_field<std::vector<double>>(doc, "betas", where);
    if (config.betas.empty()) throw ConfigError("solve config: \"betas\" is empty");
    if (doc.contains("numeric_mode")) {
        config.numeric_mode = numeric_mode_from_string(get_field<std::string>(doc, "numeric_mode", where));
    }
    config.overflow_budget = get_field_or<double>(doc, "overflow_budget", kDefaultOverflowBudget, where);
    return config;
}

json to_json(const SolveConfig& config) {
    return json{{"mdp", config.mdp},
                {"betas", config.betas},
                {"numeric_mode", std::string(to_string(config.numeric_mode))},
                {"overflow_budget", config.overflow_budget}};
}

std::string config_hash(const json& doc) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char c : doc.dump()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    static constexpr char hex[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i, h >>= 4) out[i] = hex[h & 0xf];
    return out;
}

} // namespace riskrl
