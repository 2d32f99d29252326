#include "codafin/commands.hpp"

#include "codafin/error.hpp"
#include "codafin/ingest/config.hpp"
#include "codafin/ingest/panel.hpp"
#include "codafin/lmm/model_frame.hpp"
#include "codafin/lmm/reml.hpp"
#include "codafin/lmm/report.hpp"
#include "codafin/ratios/catalog.hpp"
#include "codafin/run_report.hpp"
#include "codafin/simulate/simulator.hpp"
#include "codafin/simulate/toy.hpp"
#include "codafin/stats/descriptive.hpp"
#include "codafin/stats/export.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iomanip>
#include <optional>
#include <sstream>

namespace codafin::app {
namespace {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

struct Options {
    std::string input;
    std::string scheme = "d3";
    std::vector<std::string> responses;
    bool ml = false;
    bool reml = false;
    std::optional<std::uint64_t> seed;
    std::string config;
    std::string out_dir = ".";
    bool timestamps = false;
    int baseline_year = lmm::DesignOptions{}.baseline_year;
};

/// Echo sink for a single output file inside the out dir.
class OutFile {
public:
    OutFile(const Options& o, const std::string& name) : path_(fs::path(o.out_dir) / name) {
        fs::create_directories(o.out_dir);
        out_.open(path_, std::ios::binary | std::ios::trunc);
        if (!out_) throw std::runtime_error("cannot write '" + path_.string() + "'");
    }
    std::ostream& stream() { return out_; }
    const fs::path& path() const { return path_; }

private:
    fs::path path_;
    std::ofstream out_;
};

void write_json(const Options& o, const std::string& name, const ordered_json& j) {
    OutFile f(o, name);
    f.stream() << j.dump(2) << '\n';
}

struct LoadedPanel {
    InputEcho echo;
    ingest::PanelDataset panel;
};

LoadedPanel load_panel(const Options& o) {
    if (o.input.empty()) throw ConfigError("input", "--input is required");
    ingest::IngestConfig cfg = ingest::IngestConfig::defaults();
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw ConfigError("config", "cannot open config '" + o.config + "'");
        cfg = ingest::IngestConfig::parse(in);
    }
    LoadedPanel p;
    p.echo = read_input(o.input);
    std::istringstream in(p.echo.bytes);
    p.panel = ingest::parse_panel_csv(in, cfg);
    OutFile rej(o, "rejections.jsonl");
    ingest::write_rejections_jsonl(rej.stream(), p.panel.rejected);
    return p;
}

ordered_json config_echo(const Options& o, const InputEcho& echo, ratios::Scheme scheme) {
    return {{"input", echo.basename},
            {"input_fnv1a", echo.checksum},
            {"scheme", std::string(ratios::to_string(scheme))},
            {"criterion", o.ml ? "ml" : "reml"},
            {"baseline_year", o.baseline_year},
            {"ingest_config", o.config.empty() ? ordered_json(nullptr) : ordered_json(fs::path(o.config).filename().string())}};
}

lmm::FitOptions fit_options(const Options& o) {
    lmm::FitOptions f;
    f.criterion = o.ml ? lmm::Criterion::ml : lmm::Criterion::reml;
    return f;
}

std::string format_fixed(double v, int precision = 4) {
    std::ostringstream ss;
    ss << std::fixed << std::setprecision(precision) << v;
    return ss.str();
}

int cmd_describe(const Options& o, std::ostream& out, std::ostream& err) {
    const auto scheme = ratios::parse_scheme(o.scheme);
    const auto catalog = ratios::standard_catalog(scheme);
    std::vector<ratios::RatioSpec> specs;
    if (o.responses.empty()) {
        specs = catalog.ratios;
    } else {
        for (const auto& r : o.responses) specs.push_back(ratios::resolve_ratio(catalog, r));
    }

    const auto loaded = load_panel(o);
    const auto& panel = loaded.panel;
    if (panel.rows.empty()) {
        err << "error: no_valid_rows: every data line was rejected (" << panel.rejected.size()
            << " rejections in rejections.jsonl)\n";
        return exit_data;
    }

    struct Group {
        std::string name;
        std::vector<std::size_t> rows;
    };
    std::vector<Group> groups;
    ordered_json warnings = ordered_json::array();
    if (panel.has_family) {
        groups = {{"family", {}}, {"non_family", {}}};
        for (std::size_t i = 0; i < panel.rows.size(); ++i) groups[*panel.rows[i].family ? 0 : 1].rows.push_back(i);
    } else {
        const std::string w = "no family column in input; summaries cover a single group 'all'";
        err << "warning: " << w << '\n';
        warnings.push_back(w);
        groups = {{"all", {}}};
        for (std::size_t i = 0; i < panel.rows.size(); ++i) groups[0].rows.push_back(i);
    }

    std::vector<coda::Composition> comps;
    comps.reserve(panel.rows.size());
    for (const auto& r : panel.rows) comps.push_back(ingest::to_composition(r, scheme));

    ordered_json summaries = ordered_json::array();
    OutFile skew(o, "skewness.csv");
    skew.stream() << "group,ratio,n,skewness\n";
    out << "group        ratio    n        skewness  outliers\n";
    for (const auto& g : groups) {
        if (g.rows.empty()) {
            const std::string w = "group '" + g.name + "' has no rows";
            err << "warning: " << w << '\n';
            warnings.push_back(w);
            continue;
        }
        std::vector<std::string> keys;
        for (std::size_t i : g.rows) keys.push_back(panel.rows[i].key());
        for (const auto& spec : specs) {
            std::vector<double> values;
            values.reserve(g.rows.size());
            for (std::size_t i : g.rows) values.push_back(ratios::evaluate(spec, comps[i]));
            const auto summary = stats::tukey_outliers(values);
            summaries.push_back(stats::boxplot_record(summary, g.name, spec.name(), keys, values));

            std::optional<double> sk;
            try {
                sk = stats::skewness(values);
            } catch (const std::exception&) {
                // fewer than three values or a constant series
            }
            skew.stream() << g.name << ',' << spec.name() << ',' << values.size() << ','
                          << (sk ? ingest::format_number(*sk) : "") << '\n';
            out << std::left << std::setw(13) << g.name << std::setw(9) << spec.name() << std::setw(9)
                << values.size() << std::setw(10) << (sk ? format_fixed(*sk) : "n/a")
                << summary.outlier_indices.size() << '\n';
        }
    }

    ordered_json doc;
    doc["scheme"] = std::string(ratios::to_string(scheme));
    doc["grouping"] = panel.has_family ? "family" : "all";
    doc["warnings"] = warnings;
    doc["ingestion"] = ingestion_json(panel, {});
    doc["summaries"] = summaries;
    write_json(o, "boxplots.json", doc);
    return exit_ok;
}

void print_fit(std::ostream& out, const lmm::LmmFit& fit, const lmm::DiagnosticsBundle& d) {
    out << "response " << fit.response_name << ": " << (fit.converged ? "converged" : "not converged")
        << (fit.boundary ? " (sigma2_u at boundary)" : "") << ", " << fit.evaluations << " evaluations\n";
    out << "  sigma2_u " << ingest::format_number(fit.sigma2_u) << "  sigma2_e " << ingest::format_number(fit.sigma2_e)
        << "  loglik " << ingest::format_number(fit.loglik) << '\n';
    out << "  heteroscedasticity " << format_fixed(d.heteroscedasticity.statistic) << " (p "
        << format_fixed(d.heteroscedasticity.p_value) << "), residual outliers " << d.residual_summary.outlier_indices.size()
        << '\n';
    out << "  " << std::left << std::setw(16) << "term" << std::right << std::setw(12) << "coef" << std::setw(12)
        << "se" << std::setw(10) << "p" << '\n';
    for (const auto& r : lmm::wald_report(fit)) {
        out << "  " << std::left << std::setw(16) << r.name << std::right << std::setw(12) << format_fixed(r.coefficient)
            << std::setw(12) << format_fixed(r.se) << std::setw(10) << format_fixed(r.p) << '\n';
    }
}

int cmd_fit(const Options& o, std::ostream& out, std::ostream&) {
    const auto scheme = ratios::parse_scheme(o.scheme);
    const auto catalog = ratios::standard_catalog(scheme);
    const auto spec = ratios::resolve_ratio(catalog, o.responses.empty() ? "z1" : o.responses.front());

    const auto loaded = load_panel(o);
    lmm::DesignOptions dopt;
    dopt.baseline_year = o.baseline_year;
    const auto built = lmm::build_design(loaded.panel, spec, scheme, dopt);
    const auto fit = lmm::fit_reml(built.frame, fit_options(o));
    const auto diag = lmm::diagnostics(fit);
    const auto rows = lmm::wald_report(fit);

    {
        OutFile f(o, "wald.csv");
        lmm::write_wald_csv(f.stream(), rows);
    }
    write_json(o, "wald.json", lmm::wald_json(rows));
    {
        OutFile f(o, "diagnostics.jsonl");
        lmm::write_diagnostics_jsonl(f.stream(), diag);
    }
    ordered_json summary;
    summary["config"] = config_echo(o, loaded.echo, scheme);
    summary["ingestion"] = ingestion_json(loaded.panel, built.rejected);
    summary["fit"] = lmm::fit_summary_json(fit, diag);
    if (o.timestamps) summary["timestamp"] = utc_timestamp();
    write_json(o, "fit.json", summary);
    print_fit(out, fit, diag);
    return exit_ok;
}

const std::vector<std::string> kCompareModels = {"z1", "r1", "r1_p", "z2", "r2", "r2_p"};

int cmd_compare(const Options& o, std::ostream& out, std::ostream& err) {
    const auto scheme = ratios::parse_scheme(o.scheme);
    if (scheme != ratios::Scheme::d3) throw SchemeError("compare runs on the d3 scheme (STL, LTL, EQ)");
    const auto catalog = ratios::standard_catalog(scheme);
    const auto loaded = load_panel(o);
    lmm::DesignOptions dopt;
    dopt.baseline_year = o.baseline_year;

    std::vector<lmm::DesignBuild> builds;
    for (const auto& name : kCompareModels) {
        builds.push_back(lmm::build_design(loaded.panel, catalog.find(name), scheme, dopt));
        if (builds.back().frame.row_keys != builds.front().frame.row_keys)
            throw DesignError(name, "response '" + name + "' selects different rows than " + kCompareModels.front());
    }

    const auto options = fit_options(o);
    std::vector<std::future<ModelResult>> jobs;
    for (std::size_t k = 0; k < builds.size(); ++k) {
        jobs.push_back(std::async(std::launch::async, [&, k] {
            ModelResult m;
            m.response = kCompareModels[k];
            try {
                auto fit = lmm::fit_reml(builds[k].frame, options);
                m.diagnostics = lmm::diagnostics(fit);
                m.fit = std::move(fit);
            } catch (const FitError& e) {
                m.error = e.what();
            }
            return m;
        }));
    }

    RunReport report;
    report.command = "compare";
    report.config = config_echo(o, loaded.echo, scheme);
    report.seed = o.seed;
    report.ingestion = ingestion_json(loaded.panel, builds.front().rejected);
    for (auto& j : jobs) report.models.push_back(j.get());
    if (o.timestamps) report.timestamp = utc_timestamp();

    {
        OutFile f(o, "compare.csv");
        write_compare_csv(f.stream(), report.models);
    }
    write_json(o, "report.json", report.to_json());

    std::size_t failed = 0;
    for (const auto& m : report.models) {
        if (m.fit) {
            OutFile f(o, "diagnostics_" + m.response + ".jsonl");
            lmm::write_diagnostics_jsonl(f.stream(), *m.diagnostics);
            print_fit(out, *m.fit, *m.diagnostics);
        } else {
            ++failed;
            err << "error: model " << m.response << " failed: " << m.error << '\n';
        }
    }
    return failed == report.models.size() ? exit_numerical : exit_ok;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
    auto cfg = sim::SimConfig::defaults();
    if (!o.config.empty()) {
        std::ifstream in(o.config);
        if (!in) throw ConfigError("config", "cannot open config '" + o.config + "'");
        cfg = sim::SimConfig::parse(in);
    }
    if (o.seed) cfg.seed = *o.seed;
    cfg.validate();
    const auto s = sim::gen_panel(cfg);
    {
        OutFile f(o, "panel.csv");
        ingest::write_panel_csv(f.stream(), s.panel);
    }
    write_json(o, "ground_truth.json", s.truth.to_json());
    out << "wrote " << s.panel.rows.size() << " rows (" << cfg.n_firms << " firms x " << cfg.years
        << " years, seed " << cfg.seed << ") to " << (fs::path(o.out_dir) / "panel.csv").string() << '\n';
    return exit_ok;
}

ordered_json toy_series(const sim::ToySeries& s, const std::string& name, const std::vector<std::string>& keys) {
    ordered_json j;
    j["name"] = name;
    j["values"] = s.values;
    j["outlier_companies"] = s.outlier_companies;
    j["boxplot"] = stats::boxplot_record(s.summary, "all", name, keys, s.values);
    return j;
}

int cmd_toy(const Options& o, std::ostream& out, std::ostream&) {
    const auto t = sim::analyze_toy();
    std::vector<std::string> keys;
    ordered_json companies = ordered_json::array();
    for (const auto& c : t.companies) {
        keys.push_back(std::to_string(c.company));
        companies.push_back({{"company", c.company}, {"x1", c.x1}, {"x2", c.x2}});
    }
    ordered_json doc;
    doc["companies"] = companies;
    doc["series"] = ordered_json::array({toy_series(t.ratio_a, "ratio_a", keys), toy_series(t.ratio_b, "ratio_b", keys),
                                         toy_series(t.balance, "balance", keys),
                                         toy_series(t.balance_permuted, "balance_permuted", keys)});
    write_json(o, "toy.json", doc);
    auto list = [](const std::vector<int>& v) {
        std::string s = "{";
        for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + std::to_string(v[i]);
        return s + "}";
    };
    out << "ratio_a outliers " << list(t.ratio_a.outlier_companies) << '\n'
        << "ratio_b outliers " << list(t.ratio_b.outlier_companies) << '\n'
        << "balance outliers " << list(t.balance.outlier_companies) << '\n'
        << "balance_permuted outliers " << list(t.balance_permuted.outlier_companies) << '\n';
    return exit_ok;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
    try {
        return body();
    } catch (const FitError& e) {
        err << "error: fit failed: " << e.what() << " (" << e.trace().size() << " criterion evaluations recorded)\n";
        return exit_numerical;
    } catch (const DesignError& e) {
        err << "error: design: " << e.what();
        if (!e.column().empty()) err << " [column " << e.column() << "]";
        err << '\n';
        return exit_data;
    } catch (const ConfigError& e) {
        err << "error: config: " << e.what() << " [field " << e.field() << "]\n";
        return exit_data;
    } catch (const SchemaError& e) {
        err << "error: schema: " << e.what() << '\n';
        return exit_data;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_data;
    }
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Compositional and traditional financial ratio analysis", "codafin"};
    app.set_version_flag("--version", std::string(CODAFIN_VERSION));
    app.require_subcommand(1);
    Options o;

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("--input", o.input, "Panel CSV")->envname("CODAFIN_INPUT");
        sub->add_option("--config", o.config, "Column-mapping config file")->envname("CODAFIN_CONFIG");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--scheme", o.scheme, "Part scheme: d3 or d4")
            ->envname("CODAFIN_SCHEME")
            ->check(CLI::IsMember({"d3", "d4", "D3", "D4"}));
        sub->add_option("--out-dir", o.out_dir, "Directory for output files")->envname("CODAFIN_OUT_DIR");
    };
    auto add_fit_flags = [&](CLI::App* sub) {
        auto* ml = sub->add_flag("--ml", o.ml, "Maximum likelihood instead of REML")->envname("CODAFIN_ML");
        sub->add_flag("--reml", o.reml, "Restricted maximum likelihood (default)")
            ->envname("CODAFIN_REML")
            ->excludes(ml);
        sub->add_option("--baseline-year", o.baseline_year, "Year absorbed by the intercept")
            ->envname("CODAFIN_BASELINE_YEAR");
        sub->add_flag("--timestamps", o.timestamps, "Embed a UTC timestamp in reports")->envname("CODAFIN_TIMESTAMPS");
    };
    auto add_seed = [&](CLI::App* sub) {
        sub->add_option("--seed", o.seed, "Random seed")->envname("CODAFIN_SEED");
    };

    auto* describe = app.add_subcommand("describe", "Boxplot summaries and skewness per group and ratio");
    add_input(describe);
    add_common(describe);
    describe->add_option("--response", o.responses, "Ratio name or definition; repeatable")
        ->envname("CODAFIN_RESPONSE");

    auto* fit = app.add_subcommand("fit", "Random-intercept model for one ratio");
    add_input(fit);
    add_common(fit);
    add_fit_flags(fit);
    add_seed(fit);
    fit->add_option("--response", o.responses, "Ratio name or definition, e.g. z1 or 'q = EQ / STL'")
        ->envname("CODAFIN_RESPONSE")
        ->expected(1);

    auto* compare = app.add_subcommand("compare", "Fit z1, r1, r1_p, z2, r2, r2_p on one design");
    add_input(compare);
    add_common(compare);
    add_fit_flags(compare);
    add_seed(compare);

    auto* simulate = app.add_subcommand("simulate", "Write a synthetic panel and its ground truth");
    simulate->add_option("--config", o.config, "Simulation config file")->envname("CODAFIN_CONFIG");
    simulate->add_option("--out-dir", o.out_dir, "Directory for output files")->envname("CODAFIN_OUT_DIR");
    add_seed(simulate);

    auto* toy = app.add_subcommand("toy", "Two-part outlier illustration");
    toy->add_option("--out-dir", o.out_dir, "Directory for output files")->envname("CODAFIN_OUT_DIR");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::CallForVersion&) {
        out << CODAFIN_VERSION << '\n';
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n' << "run 'codafin --help' for usage\n";
        return exit_usage;
    }

    if (describe->parsed()) return guarded([&] { return cmd_describe(o, out, err); }, err);
    if (fit->parsed()) return guarded([&] { return cmd_fit(o, out, err); }, err);
    if (compare->parsed()) return guarded([&] { return cmd_compare(o, out, err); }, err);
    if (simulate->parsed()) return guarded([&] { return cmd_simulate(o, out, err); }, err);
    return guarded([&] { return cmd_toy(o, out, err); }, err);
}

}  // namespace codafin::app
