#include "codafin/simulate/simulator.hpp"

#include "codafin/coda/balance.hpp"
#include "codafin/error.hpp"
#include "codafin/ratios/catalog.hpp"
#include "codafin/simulate/rng.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>

namespace codafin::sim {

namespace {

const std::vector<std::string> kBaseColumns = {"Intercept",      "Family",     "MildTechIntens",
                                               "HighTechIntens", "Innovation", "FirmSize"};

bool is_known_column(const std::string& name, const SimConfig& c) {
    for (const auto& b : kBaseColumns) {
        if (b == name) return true;
    }
    for (int t = 1; t < c.years; ++t) {
        if (name == "Year" + std::to_string(c.start_year + t)) return true;
    }
    return false;
}

double to_double(const std::string& key, const std::string& value) {
    double out = 0.0;
    const char* first = value.data();
    const char* last = first + value.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || !std::isfinite(out)) {
        throw ConfigError(key, "'" + key + "' expects a number, got '" + value + "'");
    }
    return out;
}

template <class Int>
Int to_integer(const std::string& key, const std::string& value) {
    Int out{};
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError(key, "'" + key + "' expects a non-negative integer, got '" + value + "'");
    }
    return out;
}

double coefficient(const std::map<std::string, double>& beta, const std::string& name) {
    auto it = beta.find(name);
    return it == beta.end() ? 0.0 : it->second;
}

}  // namespace

SimConfig SimConfig::defaults() {
    SimConfig c;
    c.beta_z1 = {{"Intercept", 0.0},       {"Family", -0.05},    {"MildTechIntens", 0.11},
                 {"HighTechIntens", 0.19}, {"Innovation", 0.04}, {"FirmSize", 0.034}};
    c.beta_z2 = {{"Intercept", -0.5},       {"Family", 0.061},     {"MildTechIntens", -0.294},
                 {"HighTechIntens", -0.241}, {"Innovation", -0.096}, {"FirmSize", 0.08}};
    return c;
}

SimConfig SimConfig::parse(std::istream& in) {
    SimConfig c = defaults();
    const std::map<std::string, std::function<void(const std::string&, const std::string&)>> setters = {
        {"n_firms", [&](auto& k, auto& v) { c.n_firms = to_integer<std::size_t>(k, v); }},
        {"years", [&](auto& k, auto& v) { c.years = to_integer<int>(k, v); }},
        {"start_year", [&](auto& k, auto& v) { c.start_year = to_integer<int>(k, v); }},
        {"seed", [&](auto& k, auto& v) { c.seed = to_integer<std::uint64_t>(k, v); }},
        {"sigma_u", [&](auto& k, auto& v) { c.sigma_u = to_double(k, v); }},
        {"sigma_e", [&](auto& k, auto& v) { c.sigma_e = to_double(k, v); }},
        {"family_share", [&](auto& k, auto& v) { c.family_share = to_double(k, v); }},
        {"tech_mid_share", [&](auto& k, auto& v) { c.tech_mid_share = to_double(k, v); }},
        {"tech_high_share", [&](auto& k, auto& v) { c.tech_high_share = to_double(k, v); }},
        {"innovation_rate", [&](auto& k, auto& v) { c.innovation_rate = to_double(k, v); }},
        {"log_employees_mean", [&](auto& k, auto& v) { c.log_employees_mean = to_double(k, v); }},
        {"log_employees_sd", [&](auto& k, auto& v) { c.log_employees_sd = to_double(k, v); }},
        {"log_employees_year_sd", [&](auto& k, auto& v) { c.log_employees_year_sd = to_double(k, v); }},
        {"log_total_mean", [&](auto& k, auto& v) { c.log_total_mean = to_double(k, v); }},
        {"log_total_sd", [&](auto& k, auto& v) { c.log_total_sd = to_double(k, v); }},
    };
    std::vector<std::pair<std::string, std::string>> betas;
    for (const auto& [key, value] : ingest::read_key_values(in)) {
        if (auto it = setters.find(key); it != setters.end()) {
            it->second(key, value);
        } else if (key.rfind("beta.z1.", 0) == 0 || key.rfind("beta.z2.", 0) == 0) {
            betas.emplace_back(key, value);
        } else {
            throw ConfigError(key, "unknown simulation config key '" + key + "'");
        }
    }
    // Year columns depend on start_year/years, so coefficients are applied last.
    for (const auto& [key, value] : betas) {
        const std::string column = key.substr(8);
        if (!is_known_column(column, c)) throw ConfigError(key, "'" + key + "' names no design column");
        (key[6] == '1' ? c.beta_z1 : c.beta_z2)[column] = to_double(key, value);
    }
    c.validate();
    return c;
}

void SimConfig::validate() const {
    if (n_firms < 2) throw ConfigError("n_firms", "n_firms must be at least 2");
    if (years < 1) throw ConfigError("years", "years must be at least 1");
    if (start_year < 1900 || start_year + years - 1 > 2100) {
        throw ConfigError("start_year", "simulated years must lie within 1900-2100");
    }
    auto nonneg = [](const char* name, double v) {
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError(name, std::string(name) + " must be finite and >= 0");
    };
    auto share = [](const char* name, double v) {
        if (!(v >= 0.0 && v <= 1.0)) throw ConfigError(name, std::string(name) + " must lie in [0, 1]");
    };
    nonneg("sigma_u", sigma_u);
    nonneg("sigma_e", sigma_e);
    nonneg("log_employees_sd", log_employees_sd);
    nonneg("log_employees_year_sd", log_employees_year_sd);
    nonneg("log_total_sd", log_total_sd);
    share("family_share", family_share);
    share("tech_mid_share", tech_mid_share);
    share("tech_high_share", tech_high_share);
    share("innovation_rate", innovation_rate);
    if (tech_mid_share + tech_high_share > 1.0) {
        throw ConfigError("tech_high_share", "tech_mid_share + tech_high_share must not exceed 1");
    }
    for (const auto* beta : {&beta_z1, &beta_z2}) {
        for (const auto& [name, value] : *beta) {
            const std::string key = std::string(beta == &beta_z1 ? "beta.z1." : "beta.z2.") + name;
            if (!is_known_column(name, *this)) throw ConfigError(key, "'" + key + "' names no design column");
            if (!std::isfinite(value)) throw ConfigError(key, "'" + key + "' must be finite");
        }
    }
}

nlohmann::ordered_json SimConfig::to_json() const {
    return {
        {"n_firms", n_firms},
        {"years", years},
        {"start_year", start_year},
        {"seed", seed},
        {"sigma_u", sigma_u},
        {"sigma_e", sigma_e},
        {"family_share", family_share},
        {"tech_mid_share", tech_mid_share},
        {"tech_high_share", tech_high_share},
        {"innovation_rate", innovation_rate},
        {"log_employees_mean", log_employees_mean},
        {"log_employees_sd", log_employees_sd},
        {"log_employees_year_sd", log_employees_year_sd},
        {"log_total_mean", log_total_mean},
        {"log_total_sd", log_total_sd},
        {"beta_z1", beta_z1},
        {"beta_z2", beta_z2},
    };
}

nlohmann::ordered_json GroundTruth::to_json() const {
    auto firms_json = nlohmann::ordered_json::array();
    for (const auto& f : firms) firms_json.push_back({{"firm_id", f.firm_id}, {"u_z1", f.u_z1}, {"u_z2", f.u_z2}});
    return {
        {"sbp", ratios::liabilities_sbp().to_string()},
        {"config", config.to_json()},
        {"firm_intercepts", std::move(firms_json)},
    };
}

SimulatedPanel gen_panel(const SimConfig& config) {
    config.validate();
    Rng rng(config.seed);
    const auto sbp = ratios::liabilities_sbp();
    const auto labels = ratios::scheme_labels(ratios::Scheme::d3);

    SimulatedPanel out;
    out.truth.config = config;
    out.panel.has_family = true;
    const int width = std::max(4, static_cast<int>(std::to_string(config.n_firms).size()));

    std::size_t line = 1;
    for (std::size_t i = 0; i < config.n_firms; ++i) {
        char id[32];
        std::snprintf(id, sizeof id, "F%0*zu", width, i + 1);
        const bool family = rng.bernoulli(config.family_share);
        const double t = rng.uniform();
        const auto tech = t < config.tech_high_share                          ? ingest::TechIntensity::high
                          : t < config.tech_high_share + config.tech_mid_share ? ingest::TechIntensity::mid
                                                                               : ingest::TechIntensity::low;
        const double base_log_employees = rng.normal(config.log_employees_mean, config.log_employees_sd);
        FirmTruth truth{id, rng.normal(0.0, config.sigma_u), rng.normal(0.0, config.sigma_u)};

        for (int k = 0; k < config.years; ++k) {
            ingest::PanelRow row;
            row.firm_id = id;
            row.year = config.start_year + k;
            row.family = family;
            row.tech_intensity = tech;
            row.innovation = rng.bernoulli(config.innovation_rate);
            const double log_emp = base_log_employees + rng.normal(0.0, config.log_employees_year_sd);
            row.employees = std::max(1.0, std::round(std::exp(log_emp)));

            std::map<std::string, double> x = {
                {"Intercept", 1.0},
                {"Family", family ? 1.0 : 0.0},
                {"MildTechIntens", tech == ingest::TechIntensity::mid ? 1.0 : 0.0},
                {"HighTechIntens", tech == ingest::TechIntensity::high ? 1.0 : 0.0},
                {"Innovation", row.innovation ? 1.0 : 0.0},
                {"FirmSize", std::log(row.employees)},
            };
            if (k > 0) x["Year" + std::to_string(row.year)] = 1.0;
            double z1 = truth.u_z1 + rng.normal(0.0, config.sigma_e);
            double z2 = truth.u_z2 + rng.normal(0.0, config.sigma_e);
            for (const auto& [name, value] : x) {
                z1 += coefficient(config.beta_z1, name) * value;
                z2 += coefficient(config.beta_z2, name) * value;
            }
            const double total = std::exp(rng.normal(config.log_total_mean, config.log_total_sd));
            const auto shares = coda::ilr_inverse({z1, z2}, sbp, labels);
            row.stl = shares.parts()[0] * total;
            row.ltl = shares.parts()[1] * total;
            row.equity = shares.parts()[2] * total;
            row.line = ++line;
            out.panel.rows.push_back(std::move(row));
            out.truth.z.push_back({z1, z2});
        }
        out.truth.firms.push_back(std::move(truth));
    }
    out.panel.data_lines = out.panel.rows.size();
    return out;
}

std::vector<coda::Composition> lognormal_compositions(std::size_t n, double log_mean, double log_sd,
                                                      std::uint64_t seed) {
    Rng rng(seed);
    const auto labels = ratios::scheme_labels(ratios::Scheme::d3);
    std::vector<coda::Composition> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> parts(3);
        for (auto& p : parts) p = std::exp(rng.normal(log_mean, log_sd));
        out.emplace_back(std::move(parts), labels);
    }
    return out;
}

}  // namespace codafin::sim
