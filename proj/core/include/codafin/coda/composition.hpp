#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace codafin::coda {

/**
 * @brief Strictly positive vector of labelled parts (one firm-year balance sheet).
 *
 * Construction rejects zero, negative and non-finite parts, duplicate labels
 * and D < 2. Instances are immutable.
 */
class Composition {
public:
    Composition(std::vector<double> parts, std::vector<std::string> labels);

    /// Labels default to x1..xD.
    explicit Composition(std::vector<double> parts);

    [[nodiscard]] std::size_t size() const noexcept { return parts_.size(); }
    [[nodiscard]] std::span<const double> parts() const noexcept { return parts_; }
    [[nodiscard]] const std::vector<std::string>& labels() const noexcept { return labels_; }

    /// @throws LookupError if the label is not part of the composition.
    [[nodiscard]] std::size_t index_of(std::string_view label) const;
    [[nodiscard]] double part(std::string_view label) const { return parts_[index_of(label)]; }

    /// Every part multiplied by k (k > 0).
    [[nodiscard]] Composition scaled(double k) const;

private:
    std::vector<double> parts_;
    std::vector<std::string> labels_;
};

/// Parts divided by their sum; labels preserved.
[[nodiscard]] Composition closure(const Composition& x);

/**
 * Geometric mean evaluated as exp(mean(log v)). The logs are accumulated in
 * sorted order, so the result does not depend on the order of the input.
 *
 * @throws DomainError (index() = offending position) on a non-positive or
 *         non-finite value; std::invalid_argument on an empty list.
 */
[[nodiscard]] double geometric_mean(std::span<const double> values);

/// Mean of natural logs, order-independent. Same preconditions as geometric_mean.
[[nodiscard]] double mean_log(std::span<const double> values);

/**
 * Balance between two disjoint part groups:
 * sqrt(r*s/(r+s)) * ln(gm(numerator) / gm(denominator)).
 *
 * @throws SpecificationError on empty or overlapping groups.
 * @throws LookupError on a label missing from x.
 */
[[nodiscard]] double balance(const Composition& x,
                             std::span<const std::string> numerator,
                             std::span<const std::string> denominator);

}  // namespace codafin::coda
