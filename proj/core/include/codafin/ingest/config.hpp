#pragma once

#include <array>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace codafin::ingest {

/// Logical panel fields, each mapped to a CSV column name.
enum class Field {
    firm_id,
    year,
    family,
    tech_intensity,
    innovation,
    employees,
    stl,
    ltl,
    equity,
    fixed_assets,
    current_assets,
};

inline constexpr std::array kAllFields = {
    Field::firm_id,   Field::year, Field::family, Field::tech_intensity, Field::innovation,   Field::employees,
    Field::stl,       Field::ltl,  Field::equity, Field::fixed_assets,   Field::current_assets,
};

[[nodiscard]] std::string_view field_name(Field f);
[[nodiscard]] std::optional<Field> parse_field(std::string_view name);

/// Fields whose column must be present in the header.
[[nodiscard]] bool is_required(Field f);

/**
 * Parse `key = value` lines. Blank lines and lines starting with '#' are
 * skipped; surrounding whitespace is trimmed from keys and values.
 *
 * @throws ConfigError on a line without '=' (field() is the line number).
 */
[[nodiscard]] std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in);

/**
 * Column mapping plus year-range validation.
 *
 * Config file form:
 *
 *     # ESEE export
 *     firm_id = IDEMP
 *     stl = PASCORTO
 *     year_min = 1990
 */
struct IngestConfig {
    std::map<Field, std::string> columns;
    int year_min = 1900;
    int year_max = 2100;

    /// Every field mapped to its own name (firm_id -> "firm_id", ...).
    [[nodiscard]] static IngestConfig defaults();

    /// Defaults overridden by the given file. @throws ConfigError naming the key.
    [[nodiscard]] static IngestConfig parse(std::istream& in);

    [[nodiscard]] const std::string& column(Field f) const { return columns.at(f); }
};

}  // namespace codafin::ingest
