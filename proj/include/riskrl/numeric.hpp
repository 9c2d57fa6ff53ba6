#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace riskrl {

// log(sum_i w_i exp(x_i)) for nonnegative weights, shifted by the largest
// exponent among positive-weight terms so no term overflows.
// Returns -inf when every weight is zero.
inline double log_sum_exp(std::span<const double> weights, std::span<const double> exponents) {
    double shift = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] > 0.0 && exponents[i] > shift) shift = exponents[i];
    }
    if (shift == -std::numeric_limits<double>::infinity()) return shift;
    double sum = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] > 0.0) sum += weights[i] * std::exp(exponents[i] - shift);
    }
    return shift + std::log(sum);
}

// max |a - b| / max(|b|, tiny)
inline double relative_error(double a, double b) {
    const double scale = std::max(std::abs(b), std::numeric_limits<double>::min());
    return std::abs(a - b) / scale;
}

} // namespace riskrl
