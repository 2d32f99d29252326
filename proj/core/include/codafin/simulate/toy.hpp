#pragma once

#include "codafin/stats/descriptive.hpp"

#include <vector>

namespace codafin::sim {

struct ToyCompany {
    int company = 0;  ///< 1-based
    double x1 = 0.0;
    double x2 = 0.0;
};

/// Ten fictitious companies with two positive balance-sheet values each.
/// Company 4 has a large x1/x2 and company 3 a large x2/x1, at equal log distance.
[[nodiscard]] std::vector<ToyCompany> toy_dataset();

struct ToySeries {
    std::vector<double> values;
    stats::BoxplotSummary summary;
    std::vector<int> outlier_companies;
};

struct ToyAnalysis {
    std::vector<ToyCompany> companies;
    ToySeries ratio_a;        ///< x1 / x2
    ToySeries ratio_b;        ///< x2 / x1
    ToySeries balance;        ///< sqrt(1/2) ln(x1 / x2)
    ToySeries balance_permuted;
};

[[nodiscard]] ToyAnalysis analyze_toy();

}  // namespace codafin::sim
