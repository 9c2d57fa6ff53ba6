#pragma once

#include <vector>

namespace riskrl {

// Step sizes alpha_t = (H+1)/(H+t) and the effective weights
//   alpha_t^0 = prod_{j=1..t} (1 - alpha_j)
//   alpha_t^i = alpha_i prod_{j=i+1..t} (1 - alpha_j),  1 <= i <= t
// that the t-th exponential-moving-average update assigns to each sample.
class LearningRateTable {
public:
    explicit LearningRateTable(int horizon);

    int horizon() const { return horizon_; }

    // t >= 1
    double alpha(long t) const { return (horizon_ + 1.0) / (horizon_ + static_cast<double>(t)); }

    // {alpha_t^0, alpha_t^1, ..., alpha_t^t}; {1} for t = 0.
    std::vector<double> weights(long t) const;

private:
    int horizon_;
};

inline std::vector<double> alpha_weights(const LearningRateTable& table, long t) {
    return table.weights(t);
}

} // namespace riskrl
