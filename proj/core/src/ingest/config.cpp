#include "codafin/ingest/config.hpp"

#include "codafin/error.hpp"

#include <charconv>

namespace codafin::ingest {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

int parse_year_bound(const std::string& key, const std::string& value) {
    int out = 0;
    const auto* end = value.data() + value.size();
    auto [ptr, ec] = std::from_chars(value.data(), end, out);
    if (ec != std::errc{} || ptr != end) throw ConfigError(key, "'" + key + "' must be an integer, got '" + value + "'");
    return out;
}

}  // namespace

std::string_view field_name(Field f) {
    switch (f) {
        case Field::firm_id: return "firm_id";
        case Field::year: return "year";
        case Field::family: return "family";
        case Field::tech_intensity: return "tech_intensity";
        case Field::innovation: return "innovation";
        case Field::employees: return "employees";
        case Field::stl: return "stl";
        case Field::ltl: return "ltl";
        case Field::equity: return "equity";
        case Field::fixed_assets: return "fixed_assets";
        case Field::current_assets: return "current_assets";
    }
    return "";
}

std::optional<Field> parse_field(std::string_view name) {
    for (Field f : kAllFields) {
        if (field_name(f) == name) return f;
    }
    return std::nullopt;
}

bool is_required(Field f) {
    return f != Field::family && f != Field::fixed_assets && f != Field::current_assets;
}

std::vector<std::pair<std::string, std::string>> read_key_values(std::istream& in) {
    std::vector<std::pair<std::string, std::string>> out;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(number), "config line " + std::to_string(number) +
                                                                    " is not of the form key = value");
        }
        out.emplace_back(trim(std::string_view(t).substr(0, eq)), trim(std::string_view(t).substr(eq + 1)));
    }
    return out;
}

IngestConfig IngestConfig::defaults() {
    IngestConfig c;
    for (Field f : kAllFields) c.columns[f] = std::string(field_name(f));
    return c;
}

IngestConfig IngestConfig::parse(std::istream& in) {
    IngestConfig c = defaults();
    for (const auto& [key, value] : read_key_values(in)) {
        if (key == "year_min") {
            c.year_min = parse_year_bound(key, value);
        } else if (key == "year_max") {
            c.year_max = parse_year_bound(key, value);
        } else if (auto f = parse_field(key)) {
            if (value.empty()) throw ConfigError(key, "column name for '" + key + "' is empty");
            c.columns[*f] = value;
        } else {
            throw ConfigError(key, "unknown ingest config key '" + key + "'");
        }
    }
    if (c.year_min > c.year_max) throw ConfigError("year_min", "year_min exceeds year_max");
    return c;
}

}  // namespace codafin::ingest
