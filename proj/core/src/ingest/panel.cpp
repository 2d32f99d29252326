#include "codafin/ingest/panel.hpp"

#include "codafin/error.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <utility>

namespace codafin::ingest {

namespace {

// Splits one CSV record. Supports double-quoted fields with "" escapes;
// embedded newlines are not supported.
std::vector<std::string> split_record(std::string_view line) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

struct RowError {
    const char* reason;
    Field field;
    std::string detail;
};

class LineParser {
public:
    LineParser(const std::vector<std::string>& fields, const std::map<Field, std::size_t>& index)
        : fields_(fields), index_(index) {}

    std::string_view raw(Field f) const {
        const auto v = trim(fields_[index_.at(f)]);
        if (v.empty()) throw RowError{reason::missing_field, f, "empty value"};
        return v;
    }

    double number(Field f) const {
        const auto v = raw(f);
        double out = 0.0;
        const char* first = v.data();
        const char* last = v.data() + v.size();
        if (*first == '+') ++first;
        auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc{} || ptr != last || !std::isfinite(out)) {
            throw RowError{reason::unparsable_number, f, "'" + std::string(v) + "'"};
        }
        return out;
    }

    double component(Field f) const {
        const double v = number(f);
        if (!(v > 0.0)) throw RowError{reason::non_positive_component, f, format_number(v)};
        return v;
    }

    int integer(Field f) const {
        const auto v = raw(f);
        int out = 0;
        auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
        if (ec != std::errc{} || ptr != v.data() + v.size()) {
            throw RowError{reason::unparsable_number, f, "'" + std::string(v) + "'"};
        }
        return out;
    }

    bool boolean(Field f) const {
        const auto v = lower(raw(f));
        if (v == "1" || v == "true" || v == "yes") return true;
        if (v == "0" || v == "false" || v == "no") return false;
        throw RowError{reason::invalid_value, f, "'" + v + "' is not a boolean"};
    }

    TechIntensity tech(Field f) const {
        const auto v = lower(raw(f));
        if (v == "low" || v == "0") return TechIntensity::low;
        if (v == "mid" || v == "1") return TechIntensity::mid;
        if (v == "high" || v == "2") return TechIntensity::high;
        throw RowError{reason::invalid_value, f, "'" + v + "' is not one of low/mid/high"};
    }

private:
    const std::vector<std::string>& fields_;
    const std::map<Field, std::size_t>& index_;
};

}  // namespace

std::string_view to_string(TechIntensity t) {
    switch (t) {
        case TechIntensity::low: return "low";
        case TechIntensity::mid: return "mid";
        case TechIntensity::high: return "high";
    }
    return "";
}

std::string PanelRow::key() const { return firm_id + ":" + std::to_string(year); }

std::string format_number(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, 15);
    return std::string(buf, ptr);
}

PanelDataset parse_panel_csv(std::istream& in, const IngestConfig& config) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("input is empty: a header row is required");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);

    const auto header = split_record(line);
    std::map<Field, std::size_t> index;
    for (Field f : kAllFields) {
        const auto& name = config.column(f);
        auto it = std::find_if(header.begin(), header.end(), [&](const std::string& h) { return trim(h) == name; });
        if (it != header.end()) {
            index[f] = static_cast<std::size_t>(it - header.begin());
        } else if (is_required(f)) {
            throw SchemaError("required column '" + name + "' (field " + std::string(field_name(f)) +
                              ") is missing from the header");
        }
    }

    PanelDataset out;
    out.has_family = index.count(Field::family) > 0;
    out.has_assets = index.count(Field::fixed_assets) > 0 && index.count(Field::current_assets) > 0;

    std::set<std::pair<std::string, int>> keys;
    std::size_t number = 1;
    while (std::getline(in, line)) {
        ++number;
        ++out.data_lines;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) {
            out.rejected.push_back({number, reason::empty_line, "", ""});
            continue;
        }
        const auto fields = split_record(line);
        if (fields.size() != header.size()) {
            out.rejected.push_back({number, reason::wrong_field_count, "",
                                    std::to_string(fields.size()) + " fields, header has " +
                                        std::to_string(header.size())});
            continue;
        }
        const LineParser p(fields, index);
        PanelRow row;
        row.line = number;
        try {
            row.firm_id = std::string(p.raw(Field::firm_id));
            row.year = p.integer(Field::year);
            if (row.year < config.year_min || row.year > config.year_max) {
                throw RowError{reason::invalid_value, Field::year,
                               std::to_string(row.year) + " outside [" + std::to_string(config.year_min) + ", " +
                                   std::to_string(config.year_max) + "]"};
            }
            if (out.has_family) row.family = p.boolean(Field::family);
            row.tech_intensity = p.tech(Field::tech_intensity);
            row.innovation = p.boolean(Field::innovation);
            row.employees = p.number(Field::employees);
            if (!(row.employees > 0.0)) {
                throw RowError{reason::invalid_value, Field::employees, "employees must be positive"};
            }
            row.stl = p.component(Field::stl);
            row.ltl = p.component(Field::ltl);
            row.equity = p.component(Field::equity);
            if (out.has_assets) {
                row.fixed_assets = p.component(Field::fixed_assets);
                row.current_assets = p.component(Field::current_assets);
            }
        } catch (const RowError& e) {
            out.rejected.push_back({number, e.reason, std::string(field_name(e.field)), e.detail});
            continue;
        }
        if (!keys.emplace(row.firm_id, row.year).second) {
            out.rejected.push_back({number, reason::duplicate_key, "", row.key()});
            continue;
        }
        out.rows.push_back(std::move(row));
    }
    return out;
}

void write_panel_csv(std::ostream& out, const PanelDataset& panel) {
    const bool family = panel.has_family;
    const bool assets = panel.has_assets;
    out << "firm_id,year";
    if (family) out << ",family";
    out << ",tech_intensity,innovation,employees,stl,ltl,equity";
    if (assets) out << ",fixed_assets,current_assets";
    out << '\n';
    for (const auto& r : panel.rows) {
        out << r.firm_id << ',' << r.year;
        if (family) out << ',' << (r.family.value_or(false) ? 1 : 0);
        out << ',' << to_string(r.tech_intensity) << ',' << (r.innovation ? 1 : 0) << ','
            << format_number(r.employees) << ',' << format_number(r.stl) << ',' << format_number(r.ltl) << ','
            << format_number(r.equity);
        if (assets) {
            out << ',' << format_number(r.fixed_assets.value_or(0.0)) << ','
                << format_number(r.current_assets.value_or(0.0));
        }
        out << '\n';
    }
}

void write_rejections_jsonl(std::ostream& out, const std::vector<Rejection>& rejected) {
    for (const auto& r : rejected) {
        nlohmann::ordered_json j = {{"line", r.line}, {"reason", r.reason}, {"field", r.field}, {"detail", r.detail}};
        out << j.dump() << '\n';
    }
}

coda::Composition to_composition(const PanelRow& row, ratios::Scheme scheme) {
    if (scheme == ratios::Scheme::d3) {
        return coda::Composition({row.stl, row.ltl, row.equity}, ratios::scheme_labels(scheme));
    }
    if (!row.fixed_assets || !row.current_assets) {
        throw SchemeError("row " + row.key() + " lacks fixed_assets/current_assets required by the d4 scheme");
    }
    return coda::Composition({row.ltl, row.stl, *row.fixed_assets, *row.current_assets},
                             ratios::scheme_labels(scheme));
}

}  // namespace codafin::ingest
