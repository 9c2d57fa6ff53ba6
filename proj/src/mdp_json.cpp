#include "riskrl/mdp_json.hpp"

#include <fstream>

#include "riskrl/errors.hpp"

namespace riskrl {

using nlohmann::json;

json to_json(const TabularMdp& mdp) {
    const auto [H, S, A] = mdp.shape();
    json transitions = json::array();
    json rewards = json::array();
    for (int h = 0; h < H; ++h) {
        json th = json::array(), rh = json::array();
        for (int s = 0; s < S; ++s) {
            json ts = json::array(), rs = json::array();
            for (int a = 0; a < A; ++a) {
                const auto row = mdp.next_state_distribution(h, s, a);
                ts.push_back(json(std::vector<double>(row.begin(), row.end())));
                rs.push_back(mdp.reward(h, s, a));
            }
            th.push_back(std::move(ts));
            rh.push_back(std::move(rs));
        }
        transitions.push_back(std::move(th));
        rewards.push_back(std::move(rh));
    }
    return json{{"H", H},
                {"S", S},
                {"A", A},
                {"initial_state", mdp.initial_state()},
                {"transitions", std::move(transitions)},
                {"rewards", std::move(rewards)}};
}

namespace {

const json& field(const json& doc, const char* key) {
    if (!doc.is_object() || !doc.contains(key)) {
        throw ConfigError(std::string("MDP document is missing \"") + key + "\"");
    }
    return doc.at(key);
}

int int_field(const json& doc, const char* key) {
    const json& v = field(doc, key);
    if (!v.is_number_integer()) throw ConfigError(std::string("MDP field \"") + key + "\" must be an integer");
    return v.get<int>();
}

const json& sized_array(const json& v, int n, const char* what) {
    if (!v.is_array() || static_cast<int>(v.size()) != n) {
        throw ConfigError(std::string("index out of range: ") + what + " must be an array of length " +
                          std::to_string(n));
    }
    return v;
}

double number(const json& v, const char* what) {
    if (!v.is_number()) throw ConfigError(std::string(what) + " entries must be numbers");
    return v.get<double>();
}

} // namespace

MdpTables tables_from_json(const json& doc) {
    MdpTables t;
    t.shape = {int_field(doc, "H"), int_field(doc, "S"), int_field(doc, "A")};
    t.initial_state = int_field(doc, "initial_state");
    const auto [H, S, A] = t.shape;
    if (H < 1 || S < 1 || A < 1) throw ConfigError("MDP shape must have H, S, A >= 1");

    const json& tr = sized_array(field(doc, "transitions"), H, "transitions");
    const json& rw = sized_array(field(doc, "rewards"), H, "rewards");
    t.transitions.reserve(static_cast<std::size_t>(H) * S * A * S);
    t.rewards.reserve(static_cast<std::size_t>(H) * S * A);
    for (int h = 0; h < H; ++h) {
        const json& th = sized_array(tr[h], S, "transitions[h]");
        const json& rh = sized_array(rw[h], S, "rewards[h]");
        for (int s = 0; s < S; ++s) {
            const json& ts = sized_array(th[s], A, "transitions[h][s]");
            const json& rs = sized_array(rh[s], A, "rewards[h][s]");
            for (int a = 0; a < A; ++a) {
                for (const json& p : sized_array(ts[a], S, "transitions[h][s][a]")) {
                    t.transitions.push_back(number(p, "transition"));
                }
                t.rewards.push_back(number(rs[a], "reward"));
            }
        }
    }
    return t;
}

TabularMdp mdp_from_json(const json& doc) {
    return TabularMdp(tables_from_json(doc));
}

TabularMdp load_mdp(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open MDP file " + path.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigError("MDP file " + path.string() + " is not valid JSON: " + e.what());
    }
    return mdp_from_json(doc);
}

json to_json(const DeterministicPolicy& policy) {
    json out = json::array();
    for (int h = 0; h < policy.horizon(); ++h) {
        json row = json::array();
        for (int s = 0; s < policy.num_states(); ++s) row.push_back(policy.at(h, s));
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace riskrl
