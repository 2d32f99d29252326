#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace codafin::stats {

struct Quartiles {
    double q1;
    double median;
    double q3;
};

/**
 * Quantile of an ascending-sorted sample by linear interpolation between
 * order statistics: h = (n-1)p, value = (1-f) x[floor h] + f x[floor h + 1]
 * with f = h - floor h. Quantiles of the negated sample are exactly the
 * negated mirror quantiles.
 */
[[nodiscard]] double sorted_quantile(std::span<const double> sorted, double p);

/// @throws std::invalid_argument on an empty or non-finite sample.
[[nodiscard]] Quartiles quartiles(std::span<const double> sample);

/// Tukey boxplot summary with a fixed 1.5 IQR fence multiplier.
struct BoxplotSummary {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double lower_fence = 0.0;
    double upper_fence = 0.0;
    double whisker_low = 0.0;   ///< smallest value inside the fences
    double whisker_high = 0.0;  ///< largest value inside the fences
    std::vector<std::size_t> outlier_indices;  ///< ascending positions in the input
    std::size_t n = 0;
};

inline constexpr double kTukeyMultiplier = 1.5;

/**
 * Quartiles, fences and outliers of a sample. Samples with n < 4 are
 * accepted; their fences are computed the same way but carry little meaning.
 *
 * @throws std::invalid_argument on an empty or non-finite sample.
 */
[[nodiscard]] BoxplotSummary tukey_outliers(std::span<const double> sample);

/// g1 = m3 / m2^{3/2} with biased central moments.
/// @throws std::invalid_argument if n < 3; DomainError on zero variance.
[[nodiscard]] double skewness(std::span<const double> sample);

[[nodiscard]] double mean(std::span<const double> sample);

}  // namespace codafin::stats
