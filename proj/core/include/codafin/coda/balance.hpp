#pragma once

#include "codafin/coda/composition.hpp"
#include "codafin/coda/sbp.hpp"

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace codafin::coda {

/// D-1 balance coordinates of one composition.
struct BalanceVector {
    std::vector<double> values;
    std::vector<std::string> names;

    [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
};

/**
 * (D-1) x D matrix whose row k holds +sqrt(rs/(r+s))/r on the numerator
 * parts of split k and -sqrt(rs/(r+s))/s on its denominator parts; columns
 * follow `labels`. Rows are orthonormal and each sums to zero.
 *
 * @throws StructuralError when the tree and `labels` disagree.
 */
[[nodiscard]] Eigen::MatrixXd contrast_matrix(const SbpTree& sbp,
                                              const std::vector<std::string>& labels);

/// Isometric log-ratio coordinates; entry k is balance() over split k.
[[nodiscard]] BalanceVector ilr(const Composition& x, const SbpTree& sbp);

/// closure(exp(V^T z)) with parts ordered as sbp.labels().
[[nodiscard]] Composition ilr_inverse(const std::vector<double>& z, const SbpTree& sbp);

/// Same, with parts ordered as `labels`.
[[nodiscard]] Composition ilr_inverse(const std::vector<double>& z, const SbpTree& sbp,
                                      const std::vector<std::string>& labels);

}  // namespace codafin::coda
