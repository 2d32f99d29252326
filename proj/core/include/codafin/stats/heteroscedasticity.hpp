#pragma once

#include <span>

namespace codafin::stats {

struct HeteroscedasticityTest {
    double statistic = 0.0;  ///< n * R^2
    double p_value = 1.0;    ///< chi-square, 1 df
    double r_squared = 0.0;
};

/**
 * Breusch-Pagan style score: regress squared residuals on an intercept and
 * the fitted values, report n R^2 against chi-square(1). A constant
 * squared-residual or fitted series gives R^2 = 0.
 *
 * @throws std::invalid_argument on length mismatch or fewer than 3 points.
 */
[[nodiscard]] HeteroscedasticityTest breusch_pagan(std::span<const double> residuals,
                                                   std::span<const double> fitted);

}  // namespace codafin::stats
