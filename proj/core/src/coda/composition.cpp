#include "codafin/coda/composition.hpp"

#include "codafin/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace codafin::coda {

namespace {

std::vector<std::string> default_labels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) labels.push_back("x" + std::to_string(i + 1));
    return labels;
}

void check_positive(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!(values[i] > 0.0) || !std::isfinite(values[i])) {
            throw DomainError("part " + std::to_string(i) + " is not strictly positive and finite (" +
                                  std::to_string(values[i]) + ")",
                              i);
        }
    }
}

}  // namespace

Composition::Composition(std::vector<double> parts, std::vector<std::string> labels)
    : parts_(std::move(parts)), labels_(std::move(labels)) {
    if (parts_.size() < 2) throw std::invalid_argument("a composition needs at least two parts");
    if (labels_.size() != parts_.size()) {
        throw std::invalid_argument("composition has " + std::to_string(parts_.size()) + " parts but " +
                                    std::to_string(labels_.size()) + " labels");
    }
    check_positive(parts_);
    std::set<std::string_view> seen;
    for (const auto& label : labels_) {
        if (!seen.insert(label).second) throw std::invalid_argument("duplicate part label '" + label + "'");
    }
}

Composition::Composition(std::vector<double> parts)
    : Composition(parts, default_labels(parts.size())) {}

std::size_t Composition::index_of(std::string_view label) const {
    auto it = std::find(labels_.begin(), labels_.end(), label);
    if (it == labels_.end()) throw LookupError("unknown part label '" + std::string(label) + "'");
    return static_cast<std::size_t>(it - labels_.begin());
}

Composition Composition::scaled(double k) const {
    std::vector<double> parts = parts_;
    for (auto& p : parts) p *= k;
    return Composition(std::move(parts), labels_);
}

Composition closure(const Composition& x) {
    std::vector<double> parts(x.parts().begin(), x.parts().end());
    const double total = std::accumulate(parts.begin(), parts.end(), 0.0);
    for (auto& p : parts) p /= total;
    return Composition(std::move(parts), x.labels());
}

double mean_log(std::span<const double> values) {
    if (values.empty()) throw std::invalid_argument("geometric mean of an empty list");
    check_positive(values);
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (double v : sorted) sum += std::log(v);
    return sum / static_cast<double>(sorted.size());
}

double geometric_mean(std::span<const double> values) {
    const double m = mean_log(values);
    double g = std::exp(m);
    // One correction step on log(v/g), which is near zero and so carries
    // far less absolute rounding than the raw logs.
    std::vector<double> ratios;
    ratios.reserve(values.size());
    for (double v : values) ratios.push_back(v / g);
    std::sort(ratios.begin(), ratios.end());
    double correction = 0.0;
    for (double r : ratios) correction += std::log(r);
    correction /= static_cast<double>(ratios.size());
    g *= std::exp(correction);
    return g;
}

double balance(const Composition& x, std::span<const std::string> numerator,
               std::span<const std::string> denominator) {
    if (numerator.empty() || denominator.empty()) {
        throw SpecificationError("balance groups must be nonempty");
    }
    std::set<std::string_view> seen;
    for (const auto& l : numerator) {
        if (!seen.insert(l).second) throw SpecificationError("label '" + l + "' repeated in numerator");
    }
    for (const auto& l : denominator) {
        if (!seen.insert(l).second) {
            throw SpecificationError("label '" + l + "' appears in both numerator and denominator");
        }
    }
    auto gather = [&](std::span<const std::string> group) {
        std::vector<double> v;
        v.reserve(group.size());
        for (const auto& l : group) v.push_back(x.part(l));
        return v;
    };
    const auto num = gather(numerator);
    const auto den = gather(denominator);
    const double r = static_cast<double>(num.size());
    const double s = static_cast<double>(den.size());
    return std::sqrt(r * s / (r + s)) * (mean_log(num) - mean_log(den));
}

}  // namespace codafin::coda
