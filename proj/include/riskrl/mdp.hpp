#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "riskrl/rng.hpp"

namespace riskrl {

// Step indices are zero-based throughout the API (h = 0 is the first
// step, h = H is the terminal layer of value tables). Diagnostics print
// one-based steps, matching the usual h in [H] convention.

struct MdpShape {
    int horizon = 0;
    int num_states = 0;
    int num_actions = 0;

    friend bool operator==(const MdpShape&, const MdpShape&) = default;
};

// Unchecked model tables, as produced by a parser or generator.
// transitions is laid out [h][s][a][s'], rewards [h][s][a], both row-major.
struct MdpTables {
    MdpShape shape;
    int initial_state = 0;
    std::vector<double> transitions;
    std::vector<double> rewards;
};

struct ValidationReport {
    bool ok = true;
    std::string message;

    explicit operator bool() const { return ok; }
};

// Rows must sum to one within this tolerance.
inline constexpr double kRowSumTolerance = 1e-12;

ValidationReport validate(const MdpTables& tables);

// Immutable episodic tabular MDP with deterministic rewards in [0,1] and
// a fixed initial state. Construction validates the tables and
// renormalizes each kernel row exactly once.
class TabularMdp {
public:
    explicit TabularMdp(MdpTables tables);

    const MdpShape& shape() const { return tables_.shape; }
    int horizon() const { return tables_.shape.horizon; }
    int num_states() const { return tables_.shape.num_states; }
    int num_actions() const { return tables_.shape.num_actions; }
    int initial_state() const { return tables_.initial_state; }

    std::span<const double> next_state_distribution(int h, int s, int a) const;
    double reward(int h, int s, int a) const;

    const MdpTables& tables() const { return tables_; }

private:
    std::size_t sa_index(int h, int s, int a) const;

    MdpTables tables_;
};

ValidationReport validate(const TabularMdp& mdp);

class DeterministicPolicy {
public:
    DeterministicPolicy() = default;
    DeterministicPolicy(int horizon, int num_states, int fill = 0);

    int horizon() const { return horizon_; }
    int num_states() const { return num_states_; }

    int& at(int h, int s) { return actions_[index(h, s)]; }
    int at(int h, int s) const { return actions_[index(h, s)]; }

    const std::vector<int>& actions() const { return actions_; }

    friend bool operator==(const DeterministicPolicy&, const DeterministicPolicy&) = default;

private:
    std::size_t index(int h, int s) const;

    int horizon_ = 0;
    int num_states_ = 0;
    std::vector<int> actions_;
};

// Throws ConfigError unless the policy fits the model and names valid actions.
void check_policy(const TabularMdp& mdp, const DeterministicPolicy& policy);

struct Trajectory {
    std::vector<int> states;    // H + 1 entries, states[0] is the initial state
    std::vector<int> actions;   // H entries
    std::vector<double> rewards;

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

struct StepResult {
    double reward = 0.0;
    int next_state = 0;
};

// Returns r_h(s,a) and a next state drawn from P_h(.|s,a) with one rng draw.
StepResult step(const TabularMdp& mdp, int h, int s, int a, Rng& rng);

} // namespace riskrl
