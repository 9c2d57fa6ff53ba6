#pragma once

#include <span>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "riskrl/mdp.hpp"

namespace riskrl {

// Exact dynamic programming under the entropic risk measure
//   V = (1/beta) log E[exp(beta * return)].
// Expectations over next states are exact dot products with kernel rows.

enum class NumericMode {
    direct,     // work with e^{beta V} directly; bounded by the overflow budget
    log_space,  // work with beta*V through log-sum-exp; no overflow limit
};

std::string_view to_string(NumericMode mode);
NumericMode numeric_mode_from_string(std::string_view name);

inline constexpr double kDefaultOverflowBudget = 40.0;
// Relative tolerance of the exponential Bellman identity on oracle output.
inline constexpr double kBackupTolerance = 1e-12;
// Agreement required between the two numeric modes.
inline constexpr double kCrossModeTolerance = 1e-9;

struct RiskParams {
    double beta = 1.0;
    NumericMode numeric_mode = NumericMode::direct;
    double overflow_budget = kDefaultOverflowBudget;
};

// Throws ConfigError for beta == 0 or non-finite beta, and NumericError
// when direct mode is requested with |beta| (H+1) above the budget.
void check_risk_params(const RiskParams& params, int horizon);

struct ValueTables {
    MdpShape shape;
    double beta = 0.0;  // 0 marks risk-neutral tables (no exponential layers)
    std::vector<double> V;     // [h][s], h = 0..H; layer H is terminal
    std::vector<double> Q;     // [h][s][a], h = 0..H-1
    std::vector<double> expV;  // e^{beta V}
    std::vector<double> expQ;  // e^{beta Q}

    double v(int h, int s) const { return V[v_index(h, s)]; }
    double q(int h, int s, int a) const { return Q[q_index(h, s, a)]; }
    double exp_v(int h, int s) const { return expV[v_index(h, s)]; }
    double exp_q(int h, int s, int a) const { return expQ[q_index(h, s, a)]; }
    std::span<const double> q_row(int h, int s) const;
    std::span<const double> exp_q_row(int h, int s) const;

    std::size_t v_index(int h, int s) const {
        return static_cast<std::size_t>(h) * shape.num_states + s;
    }
    std::size_t q_index(int h, int s, int a) const {
        return (static_cast<std::size_t>(h) * shape.num_states + s) * shape.num_actions + a;
    }
};

// V*, Q* from the exponential Bellman optimality recursion.
ValueTables optimal_values(const TabularMdp& mdp, const RiskParams& params);

// V^pi, Q^pi for a deterministic policy.
ValueTables policy_values(const TabularMdp& mdp, const DeterministicPolicy& policy,
                          const RiskParams& params);

// Entry (h,s,a) is E[exp(mu * return from step h) | s_h = s, a_h = a, then pi],
// laid out [h][s][a]. Exactly 1 everywhere at mu = 0.
std::vector<double> mgf_of_return(const TabularMdp& mdp, const DeterministicPolicy& policy, double mu,
                                  double overflow_budget = kDefaultOverflowBudget);

// Greedy policy: arg-extremum of expQ by the sign of beta, lowest index on
// ties. Falls back to argmax of Q for risk-neutral tables or when expQ is
// not finite (log-space tables beyond double range).
DeterministicPolicy greedy_policy(const ValueTables& tables);

struct RegretTerms {
    double v_star = 0.0;
    double v_pi = 0.0;

    double regret() const { return v_star - v_pi; }
};

RegretTerms regret_terms(const TabularMdp& mdp, const DeterministicPolicy& policy,
                         const RiskParams& params);

// Same as above with V*_1(s_1) already known.
RegretTerms regret_terms(const TabularMdp& mdp, const DeterministicPolicy& policy,
                         const RiskParams& params, double v_star);

// Expected-return dynamic programming (the beta -> 0 limit). beta is 0 and
// the exponential layers are empty.
ValueTables risk_neutral_optimal_values(const TabularMdp& mdp);
ValueTables risk_neutral_policy_values(const TabularMdp& mdp, const DeterministicPolicy& policy);

// Largest relative residual of e^{beta Q_h(s,a)} = E_{s'}[e^{beta (r + V_{h+1}(s'))}]
// over all (h,s,a), with the right side rebuilt from the stored V.
double exp_bellman_residual(const TabularMdp& mdp, const ValueTables& tables);

// {"beta":..., "H","S","A", "V":[h][s], "Q":[h][s][a], "expV":..., "expQ":...}
nlohmann::json to_json(const ValueTables& tables);
ValueTables value_tables_from_json(const nlohmann::json& doc);

} // namespace riskrl
