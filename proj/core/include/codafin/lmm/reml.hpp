#pragma once

#include "codafin/lmm/model_frame.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <string>
#include <utility>
#include <vector>

namespace codafin::lmm {

enum class Criterion { reml, ml };

struct FitOptions {
    Criterion criterion = Criterion::reml;
    /// Search range for ln(lambda), lambda = sigma2_u / sigma2_e.
    double log_lambda_min = std::log(1e-8);
    double log_lambda_max = std::log(1e8);
    /// Absolute tolerance on ln(lambda) for the line search, and on the
    /// criterion when comparing against the lambda = 0 boundary.
    double tolerance = 1e-10;
    int max_evaluations = 200;
    /// Coarse grid that brackets the optimum before the Brent search.
    int grid_points = 41;
};

/**
 * @brief Fitted random-intercept model y = X beta + Z u + e.
 *
 * `fitted` and `residuals` are conditional on the predicted intercepts
 * (fitted + residuals == y); `marginal_residuals` are y - X beta.
 */
struct LmmFit {
    std::string response_name;
    std::vector<std::string> names;
    Eigen::VectorXd beta;
    Eigen::VectorXd se;
    Eigen::VectorXd z_stat;
    Eigen::VectorXd p_value;
    Eigen::MatrixXd covariance;

    double sigma2_u = 0.0;
    double sigma2_e = 0.0;
    double lambda = 0.0;
    double loglik = 0.0;  ///< REML or ML log-likelihood at the optimum
    Criterion criterion = Criterion::reml;

    Eigen::VectorXd fitted;
    Eigen::VectorXd residuals;
    Eigen::VectorXd marginal_residuals;
    Eigen::VectorXd random_effects;  ///< one per group, in frame group order

    bool converged = false;
    bool boundary = false;   ///< sigma2_u estimated at 0
    bool exact_fit = false;  ///< residual sum of squares numerically zero
    int evaluations = 0;
    std::vector<std::pair<double, double>> trace;  ///< (ln lambda, -loglik)

    std::vector<std::string> row_keys;
    std::vector<std::string> group_labels;
};

/**
 * Log-likelihood with beta and sigma2_e profiled out, at a fixed variance
 * ratio lambda >= 0. Uses the per-group transform
 * x - (1 - 1/sqrt(1 + lambda n_g)) mean_g(x), which whitens the
 * block-diagonal covariance without forming it.
 */
[[nodiscard]] double profiled_loglik(const ModelFrame& frame, double lambda, Criterion criterion = Criterion::reml);

/**
 * Maximize the profiled criterion over ln(lambda) (grid bracket, then
 * Brent), then solve GLS at the optimum. A single-group frame, or data
 * fitted exactly by OLS, is returned at the sigma2_u = 0 boundary.
 *
 * @throws FitError if n_rows <= n_columns or the evaluation budget is exhausted.
 */
[[nodiscard]] LmmFit fit_reml(const ModelFrame& frame, const FitOptions& options = {});

}  // namespace codafin::lmm
