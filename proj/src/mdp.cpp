#include "riskrl/mdp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "riskrl/errors.hpp"

namespace riskrl {

namespace {

std::string where(int h, int s, int a) {
    std::ostringstream os;
    os << "(h=" << h + 1 << ",s=" << s << ",a=" << a << ")";
    return os.str();
}

ValidationReport fail(std::string message) {
    return ValidationReport{false, std::move(message)};
}

} // namespace

ValidationReport validate(const MdpTables& t) {
    const auto [H, S, A] = t.shape;
    if (H < 1 || S < 1 || A < 1) {
        std::ostringstream os;
        os << "shape out of range: H=" << H << ", S=" << S << ", A=" << A << " (all must be >= 1)";
        return fail(os.str());
    }
    const auto sa = static_cast<std::size_t>(H) * S * A;
    if (t.rewards.size() != sa) {
        std::ostringstream os;
        os << "index out of range: rewards has " << t.rewards.size() << " entries, expected " << sa;
        return fail(os.str());
    }
    if (t.transitions.size() != sa * S) {
        std::ostringstream os;
        os << "index out of range: transitions has " << t.transitions.size() << " entries, expected "
           << sa * S;
        return fail(os.str());
    }
    if (t.initial_state < 0 || t.initial_state >= S) {
        std::ostringstream os;
        os << "index out of range: initial_state " << t.initial_state << " not in [0," << S << ")";
        return fail(os.str());
    }
    for (int h = 0; h < H; ++h) {
        for (int s = 0; s < S; ++s) {
            for (int a = 0; a < A; ++a) {
                const std::size_t i = (static_cast<std::size_t>(h) * S + s) * A + a;
                const double r = t.rewards[i];
                if (!(r >= 0.0 && r <= 1.0)) {
                    std::ostringstream os;
                    os << "reward out of range at " << where(h, s, a) << ": " << r << " not in [0,1]";
                    return fail(os.str());
                }
                double sum = 0.0;
                for (int sp = 0; sp < S; ++sp) {
                    const double p = t.transitions[i * S + sp];
                    if (!(p >= 0.0 && p <= 1.0)) {
                        std::ostringstream os;
                        os << "row " << where(h, s, a) << " has entry " << p << " for s'=" << sp
                           << " outside [0,1]";
                        return fail(os.str());
                    }
                    sum += p;
                }
                if (!(std::abs(sum - 1.0) <= kRowSumTolerance)) {
                    std::ostringstream os;
                    os << "row " << where(h, s, a) << " sums to " << sum;
                    return fail(os.str());
                }
            }
        }
    }
    return {};
}

TabularMdp::TabularMdp(MdpTables tables) : tables_(std::move(tables)) {
    if (auto report = riskrl::validate(tables_); !report) {
        throw InvalidMdp(report.message);
    }
    const int S = num_states();
    const std::size_t rows = tables_.rewards.size();
    for (std::size_t i = 0; i < rows; ++i) {
        double* row = tables_.transitions.data() + i * S;
        double sum = 0.0;
        for (int sp = 0; sp < S; ++sp) sum += row[sp];
        // Rows already normalized up to summation rounding are left alone so
        // that rebuilding a model from its own serialization is exact.
        if (std::abs(sum - 1.0) > 4.0 * S * std::numeric_limits<double>::epsilon()) {
            for (int sp = 0; sp < S; ++sp) row[sp] /= sum;
        }
    }
}

std::size_t TabularMdp::sa_index(int h, int s, int a) const {
    const auto [H, S, A] = tables_.shape;
    if (h < 0 || h >= H || s < 0 || s >= S || a < 0 || a >= A) {
        throw ConfigError("index out of range: " + where(h, s, a));
    }
    return (static_cast<std::size_t>(h) * S + s) * A + a;
}

std::span<const double> TabularMdp::next_state_distribution(int h, int s, int a) const {
    const std::size_t S = static_cast<std::size_t>(num_states());
    return {tables_.transitions.data() + sa_index(h, s, a) * S, S};
}

double TabularMdp::reward(int h, int s, int a) const {
    return tables_.rewards[sa_index(h, s, a)];
}

ValidationReport validate(const TabularMdp& mdp) {
    return validate(mdp.tables());
}

DeterministicPolicy::DeterministicPolicy(int horizon, int num_states, int fill)
    : horizon_(horizon), num_states_(num_states),
      actions_(static_cast<std::size_t>(horizon) * num_states, fill) {}

std::size_t DeterministicPolicy::index(int h, int s) const {
    if (h < 0 || h >= horizon_ || s < 0 || s >= num_states_) {
        throw ConfigError("policy index out of range");
    }
    return static_cast<std::size_t>(h) * num_states_ + s;
}

void check_policy(const TabularMdp& mdp, const DeterministicPolicy& policy) {
    if (policy.horizon() != mdp.horizon() || policy.num_states() != mdp.num_states()) {
        throw ConfigError("policy shape does not match the MDP");
    }
    for (int a : policy.actions()) {
        if (a < 0 || a >= mdp.num_actions()) {
            throw ConfigError("policy names action " + std::to_string(a) + ", outside [0," +
                              std::to_string(mdp.num_actions()) + ")");
        }
    }
}

StepResult step(const TabularMdp& mdp, int h, int s, int a, Rng& rng) {
    const auto row = mdp.next_state_distribution(h, s, a);
    const double u = uniform01(rng);
    double cdf = 0.0;
    int last_supported = 0;
    for (std::size_t sp = 0; sp < row.size(); ++sp) {
        if (row[sp] <= 0.0) continue;
        last_supported = static_cast<int>(sp);
        cdf += row[sp];
        if (u < cdf) return {mdp.reward(h, s, a), static_cast<int>(sp)};
    }
    // u landed in the rounding gap above the accumulated cdf
    return {mdp.reward(h, s, a), last_supported};
}

} // namespace riskrl
