#pragma once

#include "codafin/stats/descriptive.hpp"

#include <nlohmann/json.hpp>

#include <span>
#include <string>

namespace codafin::stats {

/**
 * One boxplot record for external plotting:
 * {"group", "ratio", "n", "q1", "median", "q3", "lower_fence", "upper_fence",
 *  "whisker_low", "whisker_high", "outliers": [{"row", "value"}...]}.
 * `row_keys` and `values` are aligned with the input of tukey_outliers.
 */
[[nodiscard]] nlohmann::ordered_json boxplot_record(const BoxplotSummary& summary, const std::string& group,
                                            const std::string& ratio,
                                            std::span<const std::string> row_keys,
                                            std::span<const double> values);

}  // namespace codafin::stats
