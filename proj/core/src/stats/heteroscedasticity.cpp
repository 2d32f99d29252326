#include "codafin/stats/heteroscedasticity.hpp"

#include "codafin/stats/distributions.hpp"

#include <stdexcept>
#include <vector>

namespace codafin::stats {

HeteroscedasticityTest breusch_pagan(std::span<const double> residuals, std::span<const double> fitted) {
    if (residuals.size() != fitted.size()) throw std::invalid_argument("residual/fitted length mismatch");
    if (residuals.size() < 3) throw std::invalid_argument("heteroscedasticity test needs at least three points");
    const std::size_t n = residuals.size();
    std::vector<double> sq(n);
    double mean_sq = 0.0;
    double mean_fit = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sq[i] = residuals[i] * residuals[i];
        mean_sq += sq[i];
        mean_fit += fitted[i];
    }
    mean_sq /= static_cast<double>(n);
    mean_fit /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = fitted[i] - mean_fit;
        const double dy = sq[i] - mean_sq;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    HeteroscedasticityTest t;
    if (sxx > 0.0 && syy > 0.0) t.r_squared = (sxy * sxy) / (sxx * syy);
    t.statistic = static_cast<double>(n) * t.r_squared;
    t.p_value = chi_square_1df_sf(t.statistic);
    return t;
}

}  // namespace codafin::stats
