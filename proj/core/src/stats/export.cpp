#include "codafin/stats/export.hpp"

#include <stdexcept>

namespace codafin::stats {

nlohmann::ordered_json boxplot_record(const BoxplotSummary& summary, const std::string& group, const std::string& ratio,
                              std::span<const std::string> row_keys, std::span<const double> values) {
    if (row_keys.size() != summary.n || values.size() != summary.n) {
        throw std::invalid_argument("boxplot record: keys/values do not match the summarized sample");
    }
    nlohmann::ordered_json outliers = nlohmann::ordered_json::array();
    for (std::size_t i : summary.outlier_indices) {
        outliers.push_back({{"row", row_keys[i]}, {"value", values[i]}});
    }
    return {
        {"group", group},
        {"ratio", ratio},
        {"n", summary.n},
        {"q1", summary.q1},
        {"median", summary.median},
        {"q3", summary.q3},
        {"lower_fence", summary.lower_fence},
        {"upper_fence", summary.upper_fence},
        {"whisker_low", summary.whisker_low},
        {"whisker_high", summary.whisker_high},
        {"outliers", std::move(outliers)},
    };
}

}  // namespace codafin::stats
