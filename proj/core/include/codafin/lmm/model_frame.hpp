#pragma once

#include "codafin/ingest/panel.hpp"
#include "codafin/ratios/catalog.hpp"
#include "codafin/ratios/ratio_spec.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <string>
#include <vector>

namespace codafin::lmm {

/**
 * @brief Response, fixed-effect design and grouping for a random-intercept model.
 *
 * Built through make_frame() or build_design(), both of which reject a
 * rank-deficient design.
 */
struct ModelFrame {
    std::string response_name;
    Eigen::VectorXd response;
    Eigen::MatrixXd design;
    std::vector<std::string> column_names;
    std::vector<std::size_t> group_index;  ///< row -> position in group_labels
    std::vector<std::string> group_labels;
    std::vector<std::string> row_keys;

    [[nodiscard]] std::size_t n_rows() const noexcept { return static_cast<std::size_t>(response.size()); }
    [[nodiscard]] std::size_t n_columns() const noexcept { return static_cast<std::size_t>(design.cols()); }
    [[nodiscard]] std::size_t n_groups() const noexcept { return group_labels.size(); }
};

/**
 * Assemble and validate a frame from raw arrays. Groups are numbered in
 * order of first appearance. Row keys default to "row<i>".
 *
 * @throws DesignError on dimension mismatch or rank deficiency; the
 *         error names the first column that is a linear combination of
 *         the columns before it.
 */
[[nodiscard]] ModelFrame make_frame(std::string response_name, Eigen::VectorXd response, Eigen::MatrixXd design,
                                    std::vector<std::string> column_names, const std::vector<std::string>& groups,
                                    std::vector<std::string> row_keys = {});

/// Same design and grouping, different response.
[[nodiscard]] ModelFrame with_response(const ModelFrame& frame, std::string response_name, Eigen::VectorXd response);

/// @throws DesignError naming the first dependent column.
void check_full_rank(const Eigen::MatrixXd& design, const std::vector<std::string>& column_names);

struct DesignOptions {
    int baseline_year = 2007;
};

struct DesignBuild {
    ModelFrame frame;
    std::vector<ingest::Rejection> rejected;  ///< rows dropped while building
};

/**
 * Fixed effects: Intercept, Family, MildTechIntens, HighTechIntens,
 * Innovation, FirmSize = ln(employees), then Year<y> for every observed year
 * other than the baseline, ascending. Firms are the random-intercept groups.
 *
 * Rows whose employees are not positive or whose composition cannot be
 * formed for the ratio are dropped into `rejected`.
 *
 * @throws DesignError when the panel has no family column, the baseline
 *         year is not observed, no rows remain, or the design is rank deficient.
 */
[[nodiscard]] DesignBuild build_design(const ingest::PanelDataset& panel, const ratios::RatioSpec& response,
                                       ratios::Scheme scheme, const DesignOptions& options = {});

}  // namespace codafin::lmm
