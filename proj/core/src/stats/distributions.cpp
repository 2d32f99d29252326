#include "codafin/stats/distributions.hpp"

#include <cmath>
#include <numbers>

namespace codafin::stats {

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double two_sided_normal_p(double z) { return std::erfc(std::fabs(z) / std::numbers::sqrt2); }

double chi_square_1df_sf(double x) {
    if (!(x > 0.0)) return 1.0;
    return std::erfc(std::sqrt(x / 2.0));
}

}  // namespace codafin::stats
