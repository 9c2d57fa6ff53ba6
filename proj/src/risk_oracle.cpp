#include "riskrl/risk_oracle.hpp"

#include <cmath>
#include <sstream>

#include "riskrl/errors.hpp"
#include "riskrl/greedy.hpp"
#include "riskrl/numeric.hpp"

namespace riskrl {

using nlohmann::json;

std::string_view to_string(NumericMode mode) {
    return mode == NumericMode::direct ? "direct" : "log_space";
}

NumericMode numeric_mode_from_string(std::string_view name) {
    if (name == "direct" || name == "direct-exponential" || name == "direct_exponential") {
        return NumericMode::direct;
    }
    if (name == "log_space" || name == "log-space") return NumericMode::log_space;
    throw ConfigError("unknown numeric_mode \"" + std::string(name) + "\" (expected direct or log_space)");
}

namespace {

void check_budget(double beta, int horizon, double budget) {
    if (std::abs(beta) * (horizon + 1) > budget) {
        std::ostringstream os;
        os << "overflow budget exceeded: |beta|*(H+1) = " << std::abs(beta) * (horizon + 1) << " > "
           << budget << " in direct mode; use numeric_mode log_space";
        throw NumericError(os.str());
    }
}

ValueTables empty_tables(const MdpShape& shape, double beta, bool exponential) {
    const auto [H, S, A] = shape;
    ValueTables t;
    t.shape = shape;
    t.beta = beta;
    t.V.assign(static_cast<std::size_t>(H + 1) * S, 0.0);
    t.Q.assign(static_cast<std::size_t>(H) * S * A, 0.0);
    if (exponential) {
        t.expV.assign(t.V.size(), 1.0);
        t.expQ.assign(t.Q.size(), 1.0);
    }
    return t;
}

// Backward induction shared by the optimal and policy-evaluation passes.
// choose(h, s, tables) returns the action whose value becomes V_h(s).
template <typename Choose>
ValueTables entropic_backup(const TabularMdp& mdp, const RiskParams& params, Choose choose) {
    check_risk_params(params, mdp.horizon());
    const auto [H, S, A] = mdp.shape();
    const double beta = params.beta;
    ValueTables t = empty_tables(mdp.shape(), beta, true);
    std::vector<double> scaled_next(S);

    for (int h = H - 1; h >= 0; --h) {
        for (int sp = 0; sp < S; ++sp) scaled_next[sp] = beta * t.v(h + 1, sp);
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const auto row = mdp.next_state_distribution(h, s, a);
                const double r = mdp.reward(h, s, a);
                const std::size_t i = t.q_index(h, s, a);
                if (params.numeric_mode == NumericMode::direct) {
                    double acc = 0.0;
                    for (int sp = 0; sp < S; ++sp) acc += row[sp] * t.exp_v(h + 1, sp);
                    t.expQ[i] = std::exp(beta * r) * acc;
                    t.Q[i] = std::log(t.expQ[i]) / beta;
                } else {
                    const double log_exp_q = beta * r + log_sum_exp(row, scaled_next);
                    t.Q[i] = log_exp_q / beta;
                    t.expQ[i] = std::exp(log_exp_q);
                }
            }
            const int a = choose(h, s, t);
            t.V[t.v_index(h, s)] = t.q(h, s, a);
            t.expV[t.v_index(h, s)] = t.exp_q(h, s, a);
        }
    }
    return t;
}

template <typename Choose>
ValueTables neutral_backup(const TabularMdp& mdp, Choose choose) {
    const auto [H, S, A] = mdp.shape();
    ValueTables t = empty_tables(mdp.shape(), 0.0, false);
    for (int h = H - 1; h >= 0; --h) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const auto row = mdp.next_state_distribution(h, s, a);
                double acc = 0.0;
                for (int sp = 0; sp < S; ++sp) acc += row[sp] * t.v(h + 1, sp);
                t.Q[t.q_index(h, s, a)] = mdp.reward(h, s, a) + acc;
            }
            t.V[t.v_index(h, s)] = t.q(h, s, choose(h, s, t));
        }
    }
    return t;
}

bool finite_row(std::span<const double> row) {
    for (double x : row) {
        if (!std::isfinite(x)) return false;
    }
    return true;
}

int greedy_at(const ValueTables& t, int h, int s) {
    if (t.beta != 0.0 && !t.expQ.empty()) {
        const auto row = t.exp_q_row(h, s);
        if (finite_row(row)) return greedy_action(row, t.beta);
    }
    return argmax_action(t.q_row(h, s));
}

} // namespace

void check_risk_params(const RiskParams& params, int horizon) {
    if (!std::isfinite(params.beta) || params.beta == 0.0) {
        throw ConfigError("beta must be a nonzero finite number");
    }
    if (params.numeric_mode == NumericMode::direct) {
        check_budget(params.beta, horizon, params.overflow_budget);
    }
}

std::span<const double> ValueTables::q_row(int h, int s) const {
    return {Q.data() + q_index(h, s, 0), static_cast<std::size_t>(shape.num_actions)};
}

std::span<const double> ValueTables::exp_q_row(int h, int s) const {
    return {expQ.data() + q_index(h, s, 0), static_cast<std::size_t>(shape.num_actions)};
}

ValueTables optimal_values(const TabularMdp& mdp, const RiskParams& params) {
    return entropic_backup(mdp, params,
                           [](int h, int s, const ValueTables& t) { return greedy_at(t, h, s); });
}

ValueTables policy_values(const TabularMdp& mdp, const DeterministicPolicy& policy,
                          const RiskParams& params) {
    check_policy(mdp, policy);
    return entropic_backup(mdp, params,
                           [&](int h, int s, const ValueTables&) { return policy.at(h, s); });
}

std::vector<double> mgf_of_return(const TabularMdp& mdp, const DeterministicPolicy& policy, double mu,
                                  double overflow_budget) {
    check_policy(mdp, policy);
    const auto [H, S, A] = mdp.shape();
    std::vector<double> mgf(static_cast<std::size_t>(H) * S * A, 1.0);
    if (mu == 0.0) return mgf;
    if (!std::isfinite(mu)) throw ConfigError("mu must be finite");
    check_budget(mu, H, overflow_budget);

    const auto idx = [&](int h, int s, int a) { return (static_cast<std::size_t>(h) * S + s) * A + a; };
    std::vector<double> next(S, 1.0);  // MGF of the remaining return at h+1 under pi
    for (int h = H - 1; h >= 0; --h) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const auto row = mdp.next_state_distribution(h, s, a);
                double acc = 0.0;
                for (int sp = 0; sp < S; ++sp) acc += row[sp] * next[sp];
                mgf[idx(h, s, a)] = std::exp(mu * mdp.reward(h, s, a)) * acc;
            }
        }
        for (int s = 0; s < S; ++s) next[s] = mgf[idx(h, s, policy.at(h, s))];
    }
    return mgf;
}

DeterministicPolicy greedy_policy(const ValueTables& tables) {
    const auto [H, S, A] = tables.shape;
    DeterministicPolicy policy(H, S);
    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) policy.at(h, s) = greedy_at(tables, h, s);
    }
    return policy;
}

RegretTerms regret_terms(const TabularMdp& mdp, const DeterministicPolicy& policy,
                         const RiskParams& params) {
    return regret_terms(mdp, policy, params, optimal_values(mdp, params).v(0, mdp.initial_state()));
}

RegretTerms regret_terms(const TabularMdp& mdp, const DeterministicPolicy& policy,
                         const RiskParams& params, double v_star) {
    const ValueTables pi = policy_values(mdp, policy, params);
    return {v_star, pi.v(0, mdp.initial_state())};
}

ValueTables risk_neutral_optimal_values(const TabularMdp& mdp) {
    return neutral_backup(mdp, [](int h, int s, const ValueTables& t) {
        return argmax_action(t.q_row(h, s));
    });
}

ValueTables risk_neutral_policy_values(const TabularMdp& mdp, const DeterministicPolicy& policy) {
    check_policy(mdp, policy);
    return neutral_backup(mdp, [&](int h, int s, const ValueTables&) { return policy.at(h, s); });
}

double exp_bellman_residual(const TabularMdp& mdp, const ValueTables& t) {
    const auto [H, S, A] = mdp.shape();
    if (!(t.shape == mdp.shape()) || t.expQ.empty()) {
        throw ConfigError("value tables do not match the MDP or carry no exponential layer");
    }
    double worst = 0.0;
    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const auto row = mdp.next_state_distribution(h, s, a);
                const double r = mdp.reward(h, s, a);
                double rebuilt = 0.0;
                for (int sp = 0; sp < S; ++sp) rebuilt += row[sp] * std::exp(t.beta * (r + t.v(h + 1, sp)));
                worst = std::max(worst, relative_error(t.exp_q(h, s, a), rebuilt));
            }
        }
    }
    return worst;
}

namespace {

json nest_v(const ValueTables& t, const std::vector<double>& flat) {
    json out = json::array();
    for (int h = 0; h <= t.shape.horizon; ++h) {
        json row = json::array();
        for (int s = 0; s < t.shape.num_states; ++s) row.push_back(flat[t.v_index(h, s)]);
        out.push_back(std::move(row));
    }
    return out;
}

json nest_q(const ValueTables& t, const std::vector<double>& flat) {
    json out = json::array();
    for (int h = 0; h < t.shape.horizon; ++h) {
        json hs = json::array();
        for (int s = 0; s < t.shape.num_states; ++s) {
            json as = json::array();
            for (int a = 0; a < t.shape.num_actions; ++a) as.push_back(flat[t.q_index(h, s, a)]);
            hs.push_back(std::move(as));
        }
        out.push_back(std::move(hs));
    }
    return out;
}

std::vector<double> flatten(const json& v, std::size_t expected, const char* name) {
    std::vector<double> out;
    const auto walk = [&](const auto& self, const json& node) -> void {
        if (node.is_array()) {
            for (const json& child : node) self(self, child);
        } else if (node.is_number()) {
            out.push_back(node.get<double>());
        } else {
            throw ConfigError(std::string("value tables: non-numeric entry in ") + name);
        }
    };
    walk(walk, v);
    if (out.size() != expected) throw ConfigError(std::string("value tables: wrong size for ") + name);
    return out;
}

} // namespace

json to_json(const ValueTables& t) {
    json out{{"beta", t.beta},
             {"H", t.shape.horizon},
             {"S", t.shape.num_states},
             {"A", t.shape.num_actions},
             {"V", nest_v(t, t.V)},
             {"Q", nest_q(t, t.Q)}};
    if (!t.expV.empty()) {
        out["expV"] = nest_v(t, t.expV);
        out["expQ"] = nest_q(t, t.expQ);
    }
    return out;
}

ValueTables value_tables_from_json(const json& doc) {
    ValueTables t;
    try {
        t.beta = doc.at("beta").get<double>();
        t.shape = {doc.at("H").get<int>(), doc.at("S").get<int>(), doc.at("A").get<int>()};
    } catch (const json::exception& e) {
        throw ConfigError(std::string("value tables: ") + e.what());
    }
    const auto [H, S, A] = t.shape;
    const std::size_t nv = static_cast<std::size_t>(H + 1) * S;
    const std::size_t nq = static_cast<std::size_t>(H) * S * A;
    t.V = flatten(doc.at("V"), nv, "V");
    t.Q = flatten(doc.at("Q"), nq, "Q");
    if (doc.contains("expV")) {
        t.expV = flatten(doc.at("expV"), nv, "expV");
        t.expQ = flatten(doc.at("expQ"), nq, "expQ");
    }
    return t;
}

} // namespace riskrl
