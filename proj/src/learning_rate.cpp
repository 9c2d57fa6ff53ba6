#include "riskrl/learning_rate.hpp"

#include "riskrl/errors.hpp"

namespace riskrl {

LearningRateTable::LearningRateTable(int horizon) : horizon_(horizon) {
    if (horizon < 1) throw ConfigError("learning rate table needs H >= 1");
}

std::vector<double> LearningRateTable::weights(long t) const {
    if (t < 0) throw ConfigError("learning rate weights need t >= 0");
    std::vector<double> w(static_cast<std::size_t>(t) + 1);
    double tail = 1.0;  // prod_{j=i+1..t} (1 - alpha_j)
    for (long i = t; i >= 1; --i) {
        w[i] = alpha(i) * tail;
        tail *= 1.0 - alpha(i);
    }
    w[0] = tail;
    return w;
}

} // namespace riskrl
