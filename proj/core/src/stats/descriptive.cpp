#include "codafin/stats/descriptive.hpp"

#include "codafin/error.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace codafin::stats {

namespace {

std::vector<double> sorted_copy(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("empty sample");
    for (double v : sample) {
        if (!std::isfinite(v)) throw std::invalid_argument("sample contains a non-finite value");
    }
    std::vector<double> s(sample.begin(), sample.end());
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace

double sorted_quantile(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw std::invalid_argument("empty sample");
    const double h = static_cast<double>(sorted.size() - 1) * p;
    const double lo = std::floor(h);
    const auto i = static_cast<std::size_t>(lo);
    const double f = h - lo;
    if (f == 0.0 || i + 1 >= sorted.size()) return sorted[i];
    return (1.0 - f) * sorted[i] + f * sorted[i + 1];
}

Quartiles quartiles(std::span<const double> sample) {
    const auto s = sorted_copy(sample);
    return {sorted_quantile(s, 0.25), sorted_quantile(s, 0.5), sorted_quantile(s, 0.75)};
}

BoxplotSummary tukey_outliers(std::span<const double> sample) {
    const auto s = sorted_copy(sample);
    BoxplotSummary b;
    b.n = sample.size();
    b.q1 = sorted_quantile(s, 0.25);
    b.median = sorted_quantile(s, 0.5);
    b.q3 = sorted_quantile(s, 0.75);
    const double iqr = b.q3 - b.q1;
    b.lower_fence = b.q1 - kTukeyMultiplier * iqr;
    b.upper_fence = b.q3 + kTukeyMultiplier * iqr;
    b.whisker_low = b.median;
    b.whisker_high = b.median;
    bool any_inside = false;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double v = sample[i];
        if (v < b.lower_fence || v > b.upper_fence) {
            b.outlier_indices.push_back(i);
            continue;
        }
        if (!any_inside) {
            b.whisker_low = b.whisker_high = v;
            any_inside = true;
        } else {
            b.whisker_low = std::min(b.whisker_low, v);
            b.whisker_high = std::max(b.whisker_high, v);
        }
    }
    return b;
}

double mean(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("empty sample");
    double sum = 0.0;
    for (double v : sample) sum += v;
    return sum / static_cast<double>(sample.size());
}

double skewness(std::span<const double> sample) {
    if (sample.size() < 3) throw std::invalid_argument("skewness needs at least three values");
    const double m = mean(sample);
    double m2 = 0.0;
    double m3 = 0.0;
    for (double v : sample) {
        const double d = v - m;
        m2 += d * d;
        m3 += d * d * d;
    }
    const auto n = static_cast<double>(sample.size());
    m2 /= n;
    m3 /= n;
    if (!(m2 > 0.0)) throw DomainError("skewness of a zero-variance sample is undefined");
    return m3 / std::pow(m2, 1.5);
}

}  // namespace codafin::stats
