#pragma once

#include "codafin/coda/composition.hpp"
#include "codafin/ingest/config.hpp"
#include "codafin/ratios/catalog.hpp"

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace codafin::ingest {

enum class TechIntensity { low, mid, high };

[[nodiscard]] std::string_view to_string(TechIntensity t);

/// One validated firm-year. Monetary parts and employees are strictly positive.
struct PanelRow {
    std::string firm_id;
    int year = 0;
    std::optional<bool> family;  ///< absent when the input has no family column
    TechIntensity tech_intensity = TechIntensity::low;
    bool innovation = false;
    double employees = 0.0;
    double stl = 0.0;
    double ltl = 0.0;
    double equity = 0.0;
    std::optional<double> fixed_assets;
    std::optional<double> current_assets;
    std::size_t line = 0;  ///< 1-based source line; the header is line 1

    /// "firm_id:year"
    [[nodiscard]] std::string key() const;
};

namespace reason {
inline constexpr const char* non_positive_component = "non_positive_component";
inline constexpr const char* missing_field = "missing_field";
inline constexpr const char* duplicate_key = "duplicate_key";
inline constexpr const char* unparsable_number = "unparsable_number";
inline constexpr const char* invalid_value = "invalid_value";
inline constexpr const char* wrong_field_count = "wrong_field_count";
inline constexpr const char* empty_line = "empty_line";
}  // namespace reason

struct Rejection {
    std::size_t line = 0;
    std::string reason;  ///< one of codafin::ingest::reason
    std::string field;   ///< logical field name, empty when not field-specific
    std::string detail;
};

/// Every data line ends up in exactly one of rows or rejected.
struct PanelDataset {
    std::vector<PanelRow> rows;
    std::vector<Rejection> rejected;
    std::size_t data_lines = 0;
    bool has_family = false;
    bool has_assets = false;  ///< fixed- and current-asset columns present
};

/**
 * Stream a CSV panel. The header is matched against the config mapping;
 * a required column missing from it raises SchemaError before any row is
 * read. Numbers are read with std::from_chars (dot decimal, no locale).
 * Booleans accept 1/0, true/false, yes/no; tech intensity accepts
 * low/mid/high or 0/1/2, case-insensitive.
 */
[[nodiscard]] PanelDataset parse_panel_csv(std::istream& in, const IngestConfig& config = IngestConfig::defaults());

/// %.15g-style shortest-of-15-significant-digits rendering used by the CSV writer.
[[nodiscard]] std::string format_number(double value);

/// Canonical CSV using the default column names; family and asset columns
/// are written only when the dataset has them.
void write_panel_csv(std::ostream& out, const PanelDataset& panel);

/// {"line": n, "reason": "...", "field": "...", "detail": "..."} per rejection.
void write_rejections_jsonl(std::ostream& out, const std::vector<Rejection>& rejected);

/**
 * Composition in canonical label order: (STL, LTL, EQ) for d3,
 * (LTL, STL, FA, CA) for d4.
 *
 * @throws SchemeError when d4 is requested on a row without asset components.
 */
[[nodiscard]] coda::Composition to_composition(const PanelRow& row, ratios::Scheme scheme);

}  // namespace codafin::ingest
