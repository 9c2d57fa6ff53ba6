#pragma once

#include <span>

namespace riskrl {

// Arg-extremum of an exponential-domain row e^{beta Q(s,.)}: argmax for
// beta > 0, argmin for beta < 0. Both pick argmax_a Q(s,a) because x ->
// (1/beta) log x is increasing for beta > 0 and decreasing for beta < 0.
// Ties go to the lowest action index.
inline int greedy_action(std::span<const double> exp_row, double beta) {
    int best = 0;
    for (int a = 1; a < static_cast<int>(exp_row.size()); ++a) {
        const bool better = beta > 0.0 ? exp_row[a] > exp_row[best] : exp_row[a] < exp_row[best];
        if (better) best = a;
    }
    return best;
}

// Plain argmax with lowest-index tie-break.
inline int argmax_action(std::span<const double> row) {
    int best = 0;
    for (int a = 1; a < static_cast<int>(row.size()); ++a) {
        if (row[a] > row[best]) best = a;
    }
    return best;
}

} // namespace riskrl
