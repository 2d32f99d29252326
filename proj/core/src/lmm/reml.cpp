#include "codafin/lmm/reml.hpp"

#include "codafin/error.hpp"
#include "codafin/stats/distributions.hpp"

#include <algorithm>
#include <cfloat>
#include <limits>
#include <numbers>

namespace codafin::lmm {

namespace {

struct GroupSums {
    std::vector<double> sizes;
    Eigen::MatrixXd x_means;  // groups x p
    Eigen::VectorXd y_means;
};

GroupSums group_means(const ModelFrame& f) {
    const auto g = static_cast<Eigen::Index>(f.n_groups());
    GroupSums s;
    s.sizes.assign(f.n_groups(), 0.0);
    s.x_means = Eigen::MatrixXd::Zero(g, f.design.cols());
    s.y_means = Eigen::VectorXd::Zero(g);
    for (Eigen::Index i = 0; i < f.design.rows(); ++i) {
        const auto k = static_cast<Eigen::Index>(f.group_index[static_cast<std::size_t>(i)]);
        s.sizes[static_cast<std::size_t>(k)] += 1.0;
        s.x_means.row(k) += f.design.row(i);
        s.y_means(k) += f.response(i);
    }
    for (Eigen::Index k = 0; k < g; ++k) {
        s.x_means.row(k) /= s.sizes[static_cast<std::size_t>(k)];
        s.y_means(k) /= s.sizes[static_cast<std::size_t>(k)];
    }
    return s;
}

struct Gls {
    Eigen::VectorXd beta;
    double rss = 0.0;
    double logdet_xtx = 0.0;  // ln |X' H^-1 X|
    double logdet_h = 0.0;    // ln |H|, V = sigma2_e H
    Eigen::MatrixXd xtx_inverse;
};

Gls solve_gls(const ModelFrame& f, const GroupSums& s, double lambda, bool want_inverse) {
    const Eigen::Index n = f.design.rows();
    const Eigen::Index p = f.design.cols();
    std::vector<double> shrink(s.sizes.size());
    Gls out;
    for (std::size_t k = 0; k < s.sizes.size(); ++k) {
        const double d = 1.0 + lambda * s.sizes[k];
        shrink[k] = 1.0 - 1.0 / std::sqrt(d);
        out.logdet_h += std::log(d);
    }
    Eigen::MatrixXd xt(n, p);
    Eigen::VectorXd yt(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = f.group_index[static_cast<std::size_t>(i)];
        const double a = shrink[k];
        xt.row(i) = f.design.row(i) - a * s.x_means.row(static_cast<Eigen::Index>(k));
        yt(i) = f.response(i) - a * s.y_means(static_cast<Eigen::Index>(k));
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(xt);
    if (qr.rank() < p) throw DesignError("", "whitened design is rank deficient");
    out.beta = qr.solve(yt);
    out.rss = (yt - xt * out.beta).squaredNorm();
    const auto r = qr.matrixR().topLeftCorner(p, p);
    for (Eigen::Index j = 0; j < p; ++j) out.logdet_xtx += 2.0 * std::log(std::fabs(r(j, j)));
    if (want_inverse) {
        const Eigen::MatrixXd rinv = r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
        const Eigen::MatrixXd inner = rinv * rinv.transpose();
        out.xtx_inverse = qr.colsPermutation() * inner * qr.colsPermutation().transpose();
    }
    return out;
}

double loglik_from(const Gls& g, double n, double p, Criterion c) {
    const double two_pi = 2.0 * std::numbers::pi;
    const double rss = std::max(g.rss, DBL_MIN);
    if (c == Criterion::reml) {
        const double dof = n - p;
        return -0.5 * (dof * (1.0 + std::log(two_pi * rss / dof)) + g.logdet_h + g.logdet_xtx);
    }
    return -0.5 * (n * (1.0 + std::log(two_pi * rss / n)) + g.logdet_h);
}

// Brent's derivative-free minimizer on [a, b], started from x with known fx.
template <class F>
double brent_minimize(F&& f, double a, double b, double x, double fx, double abs_tol) {
    const double golden = 0.5 * (3.0 - std::sqrt(5.0));
    const double eps = std::sqrt(DBL_EPSILON);
    double w = x, v = x, fw = fx, fv = fx;
    double d = 0.0, e = 0.0;
    for (;;) {
        const double xm = 0.5 * (a + b);
        const double tol1 = eps * std::fabs(x) + abs_tol / 3.0;
        const double tol2 = 2.0 * tol1;
        if (std::fabs(x - xm) <= tol2 - 0.5 * (b - a)) break;
        bool golden_step = true;
        if (std::fabs(e) > tol1) {
            double r = (x - w) * (fx - fv);
            double q = (x - v) * (fx - fw);
            double p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if (q > 0.0) p = -p;
            q = std::fabs(q);
            const double etemp = e;
            e = d;
            if (!(std::fabs(p) >= std::fabs(0.5 * q * etemp) || p <= q * (a - x) || p >= q * (b - x))) {
                d = p / q;
                const double u = x + d;
                if (u - a < tol2 || b - u < tol2) d = xm >= x ? tol1 : -tol1;
                golden_step = false;
            }
        }
        if (golden_step) {
            e = x >= xm ? a - x : b - x;
            d = golden * e;
        }
        const double u = std::fabs(d) >= tol1 ? x + d : x + (d > 0 ? tol1 : -tol1);
        const double fu = f(u);
        if (fu <= fx) {
            if (u >= x) a = x; else b = x;
            v = w; fv = fw;
            w = x; fw = fx;
            x = u; fx = fu;
        } else {
            if (u < x) a = u; else b = u;
            if (fu <= fw || w == x) {
                v = w; fv = fw;
                w = u; fw = fu;
            } else if (fu <= fv || v == x || v == w) {
                v = u; fv = fu;
            }
        }
    }
    return x;
}

}  // namespace

double profiled_loglik(const ModelFrame& frame, double lambda, Criterion criterion) {
    const auto s = group_means(frame);
    const auto g = solve_gls(frame, s, lambda, false);
    return loglik_from(g, static_cast<double>(frame.n_rows()), static_cast<double>(frame.n_columns()), criterion);
}

LmmFit fit_reml(const ModelFrame& frame, const FitOptions& options) {
    const auto n = static_cast<double>(frame.n_rows());
    const auto p = static_cast<double>(frame.n_columns());
    if (frame.n_rows() <= frame.n_columns()) {
        throw FitError("model needs more rows (" + std::to_string(frame.n_rows()) + ") than fixed effects (" +
                           std::to_string(frame.n_columns()) + ")",
                       {});
    }
    const auto sums = group_means(frame);

    LmmFit fit;
    fit.criterion = options.criterion;
    auto& trace = fit.trace;
    auto objective = [&](double t) {
        if (static_cast<int>(trace.size()) >= options.max_evaluations) {
            throw FitError("variance-ratio search exhausted its budget of " +
                               std::to_string(options.max_evaluations) + " evaluations",
                           trace);
        }
        const double lambda = std::isinf(t) && t < 0 ? 0.0 : std::exp(t);
        const double value = -loglik_from(solve_gls(frame, sums, lambda, false), n, p, options.criterion);
        trace.emplace_back(t, value);
        return value;
    };

    const double minus_inf = -std::numeric_limits<double>::infinity();
    const double at_zero = objective(minus_inf);
    const Gls ols = solve_gls(frame, sums, 0.0, false);
    const double scale = std::max(frame.response.squaredNorm(), DBL_MIN);
    fit.exact_fit = ols.rss <= 1e-20 * scale;

    double lambda = 0.0;
    if (!fit.exact_fit && frame.n_groups() >= 2) {
        const int k = std::max(options.grid_points, 3);
        const double lo = options.log_lambda_min;
        const double hi = options.log_lambda_max;
        std::vector<double> grid(static_cast<std::size_t>(k));
        std::vector<double> values(grid.size());
        for (int i = 0; i < k; ++i) {
            grid[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (k - 1);
            values[static_cast<std::size_t>(i)] = objective(grid[static_cast<std::size_t>(i)]);
        }
        const auto best = static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin());
        const double a = grid[best == 0 ? 0 : best - 1];
        const double b = grid[std::min(best + 1, grid.size() - 1)];
        const double t = brent_minimize(objective, a, b, grid[best], values[best], options.tolerance);
        const double ft = objective(t);
        if (at_zero > ft + options.tolerance) lambda = std::exp(t);
    }
    fit.boundary = lambda == 0.0;

    const Gls g = solve_gls(frame, sums, lambda, true);
    fit.evaluations = static_cast<int>(trace.size());
    fit.converged = true;
    fit.lambda = lambda;
    fit.loglik = loglik_from(g, n, p, options.criterion);
    fit.sigma2_e = g.rss / (options.criterion == Criterion::reml ? n - p : n);
    fit.sigma2_u = lambda * fit.sigma2_e;
    fit.response_name = frame.response_name;
    fit.names = frame.column_names;
    fit.beta = g.beta;
    fit.covariance = fit.sigma2_e * g.xtx_inverse;
    fit.se = fit.covariance.diagonal().cwiseMax(0.0).cwiseSqrt();
    fit.z_stat = fit.beta.cwiseQuotient(fit.se);
    fit.p_value.resize(fit.beta.size());
    for (Eigen::Index j = 0; j < fit.beta.size(); ++j) {
        fit.p_value(j) = fit.se(j) > 0.0 ? stats::two_sided_normal_p(fit.z_stat(j)) : (fit.beta(j) == 0.0 ? 1.0 : 0.0);
        if (fit.se(j) == 0.0 && fit.beta(j) == 0.0) fit.z_stat(j) = 0.0;
    }

    const Eigen::VectorXd xb = frame.design * fit.beta;
    fit.marginal_residuals = frame.response - xb;
    const auto groups = static_cast<Eigen::Index>(frame.n_groups());
    Eigen::VectorXd resid_sum = Eigen::VectorXd::Zero(groups);
    for (Eigen::Index i = 0; i < xb.size(); ++i) {
        resid_sum(static_cast<Eigen::Index>(frame.group_index[static_cast<std::size_t>(i)])) +=
            fit.marginal_residuals(i);
    }
    fit.random_effects.resize(groups);
    for (Eigen::Index k = 0; k < groups; ++k) {
        fit.random_effects(k) = lambda * resid_sum(k) / (1.0 + lambda * sums.sizes[static_cast<std::size_t>(k)]);
    }
    fit.fitted.resize(xb.size());
    for (Eigen::Index i = 0; i < xb.size(); ++i) {
        fit.fitted(i) = xb(i) + fit.random_effects(static_cast<Eigen::Index>(frame.group_index[static_cast<std::size_t>(i)]));
    }
    if (fit.exact_fit) {
        fit.fitted = frame.response;
        fit.residuals = Eigen::VectorXd::Zero(xb.size());
    } else {
        fit.residuals = frame.response - fit.fitted;
    }
    fit.row_keys = frame.row_keys;
    fit.group_labels = frame.group_labels;
    return fit;
}

}  // namespace codafin::lmm
