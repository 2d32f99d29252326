#pragma once

namespace codafin::stats {

/// Standard normal CDF.
[[nodiscard]] double normal_cdf(double x);

/// Two-sided p-value of a standard-normal statistic, P(|Z| >= |z|).
[[nodiscard]] double two_sided_normal_p(double z);

/// Upper tail of the chi-square distribution with one degree of freedom.
[[nodiscard]] double chi_square_1df_sf(double x);

}  // namespace codafin::stats
