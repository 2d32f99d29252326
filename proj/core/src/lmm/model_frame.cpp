#include "codafin/lmm/model_frame.hpp"

#include "codafin/error.hpp"

#include <cmath>
#include <map>
#include <set>

namespace codafin::lmm {

void check_full_rank(const Eigen::MatrixXd& design, const std::vector<std::string>& column_names) {
    if (design.cols() == 0) throw DesignError("", "design has no columns");
    if (design.rows() < design.cols()) {
        throw DesignError("", "design has fewer rows (" + std::to_string(design.rows()) + ") than columns (" +
                                  std::to_string(design.cols()) + ")");
    }
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
    if (qr.rank() == design.cols()) return;
    for (Eigen::Index j = 0; j < design.cols(); ++j) {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> prefix(design.leftCols(j + 1));
        if (prefix.rank() <= j) {
            const std::string& name = column_names[static_cast<std::size_t>(j)];
            const bool zero = design.col(j).isZero();
            throw DesignError(name, "design is rank deficient: column '" + name + "' " +
                                        (zero ? "is identically zero"
                                              : "is a linear combination of preceding columns"));
        }
    }
}

ModelFrame make_frame(std::string response_name, Eigen::VectorXd response, Eigen::MatrixXd design,
                      std::vector<std::string> column_names, const std::vector<std::string>& groups,
                      std::vector<std::string> row_keys) {
    const auto n = static_cast<std::size_t>(response.size());
    if (static_cast<std::size_t>(design.rows()) != n || groups.size() != n) {
        throw DesignError("", "response, design and group vectors must have the same length");
    }
    if (column_names.size() != static_cast<std::size_t>(design.cols())) {
        throw DesignError("", "column name count does not match the design");
    }
    if (!response.allFinite()) throw DesignError(response_name, "response contains non-finite values");
    check_full_rank(design, column_names);

    ModelFrame f;
    f.response_name = std::move(response_name);
    f.response = std::move(response);
    f.design = std::move(design);
    f.column_names = std::move(column_names);
    std::map<std::string, std::size_t> ids;
    f.group_index.reserve(n);
    for (const auto& g : groups) {
        auto [it, inserted] = ids.emplace(g, f.group_labels.size());
        if (inserted) f.group_labels.push_back(g);
        f.group_index.push_back(it->second);
    }
    if (row_keys.empty()) {
        row_keys.reserve(n);
        for (std::size_t i = 0; i < n; ++i) row_keys.push_back("row" + std::to_string(i));
    }
    if (row_keys.size() != n) throw DesignError("", "row key count does not match the response");
    f.row_keys = std::move(row_keys);
    return f;
}

ModelFrame with_response(const ModelFrame& frame, std::string response_name, Eigen::VectorXd response) {
    if (static_cast<std::size_t>(response.size()) != frame.n_rows()) {
        throw DesignError(response_name, "response length does not match the frame");
    }
    ModelFrame f = frame;
    f.response_name = std::move(response_name);
    f.response = std::move(response);
    return f;
}

DesignBuild build_design(const ingest::PanelDataset& panel, const ratios::RatioSpec& response, ratios::Scheme scheme,
                         const DesignOptions& options) {
    if (!panel.has_family) throw DesignError("Family", "panel has no family column; the Family effect is required");

    DesignBuild out;
    std::vector<const ingest::PanelRow*> kept;
    std::vector<double> y;
    for (const auto& row : panel.rows) {
        if (!(row.employees > 0.0)) {
            out.rejected.push_back({row.line, ingest::reason::invalid_value, "employees",
                                    "non-positive employees in " + row.key()});
            continue;
        }
        try {
            y.push_back(ratios::evaluate(response, ingest::to_composition(row, scheme)));
            kept.push_back(&row);
        } catch (const Error& e) {
            out.rejected.push_back({row.line, ingest::reason::invalid_value, "", e.what()});
        }
    }
    if (kept.empty()) throw DesignError("", "no rows available to build the design");

    std::set<int> years;
    for (const auto* r : kept) years.insert(r->year);
    if (!years.count(options.baseline_year)) {
        throw DesignError("Year" + std::to_string(options.baseline_year),
                          "baseline year " + std::to_string(options.baseline_year) + " is not observed in the panel");
    }
    years.erase(options.baseline_year);

    std::vector<std::string> names = {"Intercept", "Family", "MildTechIntens", "HighTechIntens", "Innovation",
                                      "FirmSize"};
    std::map<int, Eigen::Index> year_col;
    for (int yr : years) {
        year_col[yr] = static_cast<Eigen::Index>(names.size());
        names.push_back("Year" + std::to_string(yr));
    }

    const auto n = static_cast<Eigen::Index>(kept.size());
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, static_cast<Eigen::Index>(names.size()));
    std::vector<std::string> groups;
    std::vector<std::string> keys;
    groups.reserve(kept.size());
    keys.reserve(kept.size());
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& r = *kept[static_cast<std::size_t>(i)];
        x(i, 0) = 1.0;
        x(i, 1) = r.family.value_or(false) ? 1.0 : 0.0;
        x(i, 2) = r.tech_intensity == ingest::TechIntensity::mid ? 1.0 : 0.0;
        x(i, 3) = r.tech_intensity == ingest::TechIntensity::high ? 1.0 : 0.0;
        x(i, 4) = r.innovation ? 1.0 : 0.0;
        x(i, 5) = std::log(r.employees);
        if (auto it = year_col.find(r.year); it != year_col.end()) x(i, it->second) = 1.0;
        groups.push_back(r.firm_id);
        keys.push_back(r.key());
    }
    Eigen::VectorXd yv = Eigen::Map<const Eigen::VectorXd>(y.data(), n);
    out.frame = make_frame(response.name(), std::move(yv), std::move(x), std::move(names), groups, std::move(keys));
    return out;
}

}  // namespace codafin::lmm
