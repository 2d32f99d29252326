#pragma once

#include "codafin/lmm/reml.hpp"
#include "codafin/stats/descriptive.hpp"
#include "codafin/stats/heteroscedasticity.hpp"

#include <nlohmann/json.hpp>

#include <ostream>
#include <string>
#include <vector>

namespace codafin::lmm {

struct WaldRow {
    std::string name;
    double coefficient = 0.0;
    double se = 0.0;
    double z = 0.0;
    double p = 1.0;
};

/// Display order for Wald tables: these first, everything else after in design order.
inline const std::vector<std::string> kReportOrder = {"Family", "MildTechIntens", "HighTechIntens", "Innovation",
                                                      "FirmSize"};

/// Wald z against a standard normal, two-sided p.
[[nodiscard]] std::vector<WaldRow> wald_report(const LmmFit& fit);

struct DiagnosticRow {
    std::string row_key;
    double fitted = 0.0;
    double residual = 0.0;           ///< conditional: y - X beta - u
    double marginal_residual = 0.0;  ///< y - X beta
};

struct DiagnosticsBundle {
    std::vector<DiagnosticRow> rows;
    stats::HeteroscedasticityTest heteroscedasticity;
    stats::BoxplotSummary residual_summary;
};

/// Residual-vs-fitted pairs, heteroscedasticity score on conditional
/// residuals, and a boxplot summary of those residuals.
[[nodiscard]] DiagnosticsBundle diagnostics(const LmmFit& fit);

/// name,coefficient,se,z,p
void write_wald_csv(std::ostream& out, const std::vector<WaldRow>& rows);

[[nodiscard]] nlohmann::ordered_json wald_json(const std::vector<WaldRow>& rows);

/// {"row_key", "fitted", "residual", "marginal_residual"} per line.
void write_diagnostics_jsonl(std::ostream& out, const DiagnosticsBundle& bundle);

/// Variance components, convergence flags and diagnostic scores.
[[nodiscard]] nlohmann::ordered_json fit_summary_json(const LmmFit& fit, const DiagnosticsBundle& bundle);

}  // namespace codafin::lmm
