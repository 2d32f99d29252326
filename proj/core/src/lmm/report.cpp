#include "codafin/lmm/report.hpp"

#include "codafin/ingest/panel.hpp"

#include <algorithm>

namespace codafin::lmm {

std::vector<WaldRow> wald_report(const LmmFit& fit) {
    std::vector<std::size_t> order;
    for (const auto& name : kReportOrder) {
        auto it = std::find(fit.names.begin(), fit.names.end(), name);
        if (it != fit.names.end()) order.push_back(static_cast<std::size_t>(it - fit.names.begin()));
    }
    for (std::size_t j = 0; j < fit.names.size(); ++j) {
        if (std::find(order.begin(), order.end(), j) == order.end()) order.push_back(j);
    }
    std::vector<WaldRow> rows;
    rows.reserve(order.size());
    for (std::size_t j : order) {
        const auto e = static_cast<Eigen::Index>(j);
        rows.push_back({fit.names[j], fit.beta(e), fit.se(e), fit.z_stat(e), fit.p_value(e)});
    }
    return rows;
}

DiagnosticsBundle diagnostics(const LmmFit& fit) {
    DiagnosticsBundle b;
    const auto n = static_cast<std::size_t>(fit.residuals.size());
    b.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto e = static_cast<Eigen::Index>(i);
        b.rows.push_back({fit.row_keys[i], fit.fitted(e), fit.residuals(e), fit.marginal_residuals(e)});
    }
    const std::span<const double> resid(fit.residuals.data(), n);
    const std::span<const double> fitted(fit.fitted.data(), n);
    if (n >= 3) b.heteroscedasticity = stats::breusch_pagan(resid, fitted);
    if (n >= 1) b.residual_summary = stats::tukey_outliers(resid);
    return b;
}

void write_wald_csv(std::ostream& out, const std::vector<WaldRow>& rows) {
    out << "name,coefficient,se,z,p\n";
    for (const auto& r : rows) {
        out << r.name << ',' << ingest::format_number(r.coefficient) << ',' << ingest::format_number(r.se) << ','
            << ingest::format_number(r.z) << ',' << ingest::format_number(r.p) << '\n';
    }
}

nlohmann::ordered_json wald_json(const std::vector<WaldRow>& rows) {
    auto out = nlohmann::ordered_json::array();
    for (const auto& r : rows) {
        out.push_back({{"name", r.name}, {"coefficient", r.coefficient}, {"se", r.se}, {"z", r.z}, {"p", r.p}});
    }
    return out;
}

void write_diagnostics_jsonl(std::ostream& out, const DiagnosticsBundle& bundle) {
    for (const auto& r : bundle.rows) {
        nlohmann::ordered_json j = {{"row_key", r.row_key},
                                    {"fitted", r.fitted},
                                    {"residual", r.residual},
                                    {"marginal_residual", r.marginal_residual}};
        out << j.dump() << '\n';
    }
}

nlohmann::ordered_json fit_summary_json(const LmmFit& fit, const DiagnosticsBundle& bundle) {
    const auto& s = bundle.residual_summary;
    return {
        {"response", fit.response_name},
        {"criterion", fit.criterion == Criterion::reml ? "reml" : "ml"},
        {"converged", fit.converged},
        {"boundary", fit.boundary},
        {"exact_fit", fit.exact_fit},
        {"evaluations", fit.evaluations},
        {"n_rows", fit.residuals.size()},
        {"n_groups", fit.group_labels.size()},
        {"sigma2_u", fit.sigma2_u},
        {"sigma2_e", fit.sigma2_e},
        {"lambda", fit.lambda},
        {"loglik", fit.loglik},
        {"heteroscedasticity",
         {{"statistic", bundle.heteroscedasticity.statistic}, {"p_value", bundle.heteroscedasticity.p_value}}},
        {"residuals",
         {{"q1", s.q1},
          {"median", s.median},
          {"q3", s.q3},
          {"lower_fence", s.lower_fence},
          {"upper_fence", s.upper_fence},
          {"outliers", s.outlier_indices.size()}}},
    };
}

}  // namespace codafin::lmm
