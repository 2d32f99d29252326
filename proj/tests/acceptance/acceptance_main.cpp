// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "support/cli_harness.hpp"

#include "oracles/dense_reml.hpp"
#include "oracles/instances.hpp"

#include "codafin/coda/balance.hpp"
#include "codafin/coda/composition.hpp"
#include "codafin/lmm/model_frame.hpp"
#include "codafin/lmm/reml.hpp"
#include "codafin/ratios/catalog.hpp"
#include "codafin/simulate/rng.hpp"
#include "codafin/simulate/simulator.hpp"
#include "codafin/stats/descriptive.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace codafin;
using codafin::testing::ScratchDir;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

/// Accumulates failed checks; the first few messages are kept for the report line.
class Checks {
public:
    void expect(bool ok, const std::string& what) {
        ++total_;
        if (ok) return;
        ++failed_;
        if (failed_ <= 3) messages_ += (messages_.empty() ? "" : "; ") + what;
    }
    [[nodiscard]] Outcome outcome(const std::string& summary) const {
        if (failed_ == 0) return {true, summary};
        return {false, std::to_string(failed_) + "/" + std::to_string(total_) + " checks failed: " + messages_};
    }

private:
    int total_ = 0;
    int failed_ = 0;
    std::string messages_;
};

std::string num(double v) {
    std::ostringstream ss;
    ss << std::setprecision(4) << v;
    return ss.str();
}

double rel(double a, double b) { return std::fabs(a - b) / std::max(std::fabs(b), 1e-300); }

Outcome coda_exactness() {
    Checks c;
    const std::vector<double> gm = {9.0, 27.0, 81.0};
    c.expect(coda::geometric_mean(gm) == 27.0, "geometric_mean(9,27,81) != 27");

    const auto sbp = ratios::liabilities_sbp();
    const auto z0 = coda::ilr(coda::Composition({1.0, 1.0, 1.0}, sbp.labels()), sbp);
    c.expect(z0.values.size() == 2 && z0.values[0] == 0.0 && z0.values[1] == 0.0, "ilr((1,1,1)) != (0,0)");

    sim::Rng rng(101);
    const std::vector<std::string> labels = {"a", "b", "c", "d", "e"};
    const std::vector<std::pair<std::vector<std::string>, std::vector<std::string>>> groups = {
        {{"a"}, {"b"}}, {{"a", "b"}, {"c"}}, {{"a", "c", "e"}, {"b", "d"}}, {{"e"}, {"a", "b", "c", "d"}}};
    double worst_anti = 0.0;
    for (int i = 0; i < 10000; ++i) {
        std::vector<double> parts(labels.size());
        for (auto& p : parts) p = std::exp(rng.normal(0.0, 3.0));
        const coda::Composition x(parts, labels);
        for (const auto& [num_g, den_g] : groups) {
            const double b = coda::balance(x, num_g, den_g);
            const double bp = coda::balance(x, den_g, num_g);
            worst_anti = std::max(worst_anti, std::fabs(b + bp));
        }
    }
    c.expect(worst_anti <= 1e-13, "antisymmetry deviation " + num(worst_anti));

    double worst_round = 0.0, worst_orth = 0.0;
    for (const auto* text : {"(STL | (LTL | EQ))", "((LTL | STL) | (FA | CA))", "(a | (b | (c | (d | e))))",
                             "((a | b) | (c | (d | e)))"}) {
        const auto tree = coda::SbpTree::parse(text);
        const auto v = coda::contrast_matrix(tree, tree.labels());
        const Eigen::MatrixXd gram = v * v.transpose();
        worst_orth = std::max(worst_orth, (gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff());
        for (int i = 0; i < 1000; ++i) {
            std::vector<double> z(tree.coordinates());
            for (auto& zi : z) zi = rng.normal(0.0, 2.0);
            const auto back = coda::ilr(coda::ilr_inverse(z, tree), tree);
            for (std::size_t k = 0; k < back.values.size(); ++k)
                worst_round = std::max(worst_round, std::fabs(back.values[k] - z[k]));
        }
    }
    c.expect(worst_round <= 1e-10, "roundtrip deviation " + num(worst_round));
    c.expect(worst_orth <= 1e-12, "orthonormality deviation " + num(worst_orth));
    return c.outcome("gm=27 exact, ilr(1,1,1)=(0,0), antisymmetry " + num(worst_anti) + ", roundtrip " +
                     num(worst_round) + ", orthonormality " + num(worst_orth));
}

Outcome skewness_pathology() {
    const auto comps = sim::lognormal_compositions(10000, 10.0, 1.0, 424242);
    const auto cat = ratios::standard_catalog(ratios::Scheme::d3);
    std::vector<double> r1, r1p, z1;
    for (const auto& x : comps) {
        r1.push_back(ratios::evaluate(cat.find("r1"), x));
        r1p.push_back(ratios::evaluate(cat.find("r1_p"), x));
        z1.push_back(ratios::evaluate(cat.find("z1"), x));
    }
    const double s1 = stats::skewness(r1), s1p = stats::skewness(r1p), sz = stats::skewness(z1);
    Checks c;
    c.expect(s1 > 0.5, "skewness(r1) = " + num(s1));
    c.expect(s1p > 0.5, "skewness(r1_p) = " + num(s1p));
    c.expect(std::fabs(sz) < 0.2, "skewness(z1) = " + num(sz));
    return c.outcome("skew r1 " + num(s1) + ", r1_p " + num(s1p) + ", z1 " + num(sz));
}

Outcome toy_outliers() {
    ScratchDir a("acc_toy_a"), b("acc_toy_b");
    Checks c;
    c.expect(testing::run({"toy", "--out-dir", a.str()}).code == 0, "toy failed");
    c.expect(testing::run({"toy", "--out-dir", b.str()}).code == 0, "second toy failed");
    c.expect(testing::slurp(a.path() / "toy.json") == testing::slurp(b.path() / "toy.json"), "toy output differs");
    const auto doc = testing::load_json(a.path() / "toy.json");
    c.expect(doc["companies"].size() == 10, "expected 10 companies");
    const auto& s = doc["series"];
    c.expect(s[0]["outlier_companies"] == nlohmann::json::array({4}), "ratio A outliers " + s[0]["outlier_companies"].dump());
    c.expect(s[1]["outlier_companies"] == nlohmann::json::array({3}), "ratio B outliers " + s[1]["outlier_companies"].dump());
    c.expect(s[2]["outlier_companies"] == s[3]["outlier_companies"], "balance outliers change under negation");
    return c.outcome("A " + s[0]["outlier_companies"].dump() + ", B " + s[1]["outlier_companies"].dump() +
                     ", z and -z " + s[2]["outlier_companies"].dump());
}

Outcome lmm_oracle() {
    Checks c;
    double worst_beta = 0.0, worst_var = 0.0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        const auto frame = oracle::small_instance(seed);
        const auto fit = lmm::fit_reml(frame);
        const auto ref = oracle::dense_reml_fit(frame.design, frame.response, frame.group_index);
        for (Eigen::Index j = 0; j < fit.beta.size(); ++j) worst_beta = std::max(worst_beta, rel(fit.beta(j), ref.beta(j)));
        worst_var = std::max({worst_var, rel(fit.sigma2_u, ref.sigma2_u), rel(fit.sigma2_e, ref.sigma2_e)});
    }
    c.expect(worst_beta <= 1e-4, "beta relative error " + num(worst_beta));
    c.expect(worst_var <= 1e-3, "variance relative error " + num(worst_var));

    double worst_anova = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const std::size_t groups = 4 + seed % 5, m = 3 + seed % 4;
        const auto frame = oracle::balanced_layout(seed, groups, m, 1.0, 0.6);
        const auto fit = lmm::fit_reml(frame);
        const auto ref = oracle::anova_reml(frame.response, groups, m);
        if (ref.sigma2_u == 0.0) {
            c.expect(fit.boundary && fit.sigma2_u == 0.0, "clipped layout not on boundary");
            worst_anova = std::max(worst_anova, rel(fit.sigma2_e, ref.sigma2_e));
        } else {
            worst_anova = std::max({worst_anova, rel(fit.sigma2_u, ref.sigma2_u), rel(fit.sigma2_e, ref.sigma2_e)});
        }
    }
    c.expect(worst_anova <= 1e-6, "ANOVA relative error " + num(worst_anova));
    return c.outcome("25 dense instances: beta " + num(worst_beta) + ", variances " + num(worst_var) +
                     "; 10 balanced layouts: " + num(worst_anova));
}

Outcome sign_reversal() {
    Checks c;
    std::vector<lmm::ModelFrame> frames;
    for (std::uint64_t seed = 200; seed < 220; ++seed) frames.push_back(oracle::small_instance(seed));
    for (std::uint64_t seed = 1; seed <= 5; ++seed) frames.push_back(oracle::balanced_layout(seed, 5, 4, 0.8, 0.5));
    auto cfg = sim::SimConfig::defaults();
    cfg.n_firms = 100;
    cfg.years = 6;
    const auto panel = sim::gen_panel(cfg).panel;
    const auto cat = ratios::standard_catalog(ratios::Scheme::d3);
    for (const char* name : {"z1", "r1", "z2", "r2_p"})
        frames.push_back(lmm::build_design(panel, cat.find(name), ratios::Scheme::d3).frame);

    double worst = 0.0;
    auto track = [&](const lmm::LmmFit& a, const lmm::LmmFit& b) {
        for (Eigen::Index j = 0; j < a.beta.size(); ++j) {
            worst = std::max(worst, std::fabs(a.beta(j) + b.beta(j)) / std::max(1.0, std::fabs(a.beta(j))));
            worst = std::max(worst, std::fabs(a.se(j) - b.se(j)) / std::max(1.0, a.se(j)));
            worst = std::max(worst, std::fabs(a.p_value(j) - b.p_value(j)));
        }
    };
    for (const auto& f : frames) {
        const auto fit = lmm::fit_reml(f);
        track(fit, lmm::fit_reml(lmm::with_response(f, "neg", -f.response)));
    }
    // permuted balances are the same fit with reversed signs
    for (const char* name : {"z1", "z2"}) {
        const auto a = lmm::fit_reml(lmm::build_design(panel, cat.find(name), ratios::Scheme::d3).frame);
        const auto b = lmm::fit_reml(lmm::build_design(panel, cat.find(std::string(name) + "_p"), ratios::Scheme::d3).frame);
        track(a, b);
    }
    c.expect(worst <= 1e-9, "max deviation " + num(worst));
    return c.outcome(std::to_string(frames.size() + 2) + " frame pairs, max deviation " + num(worst));
}

struct SimulatedRun {
    ScratchDir dir{"acc_sim"};
    bool ok = false;
};

SimulatedRun& shared_simulation() {
    static SimulatedRun run;
    if (!run.ok) run.ok = testing::run({"simulate", "--out-dir", run.dir.str()}).code == 0;
    return run;
}

Outcome parameter_recovery() {
    Checks c;
    auto& sim = shared_simulation();
    c.expect(sim.ok, "simulate failed");
    const auto truth = sim::SimConfig::defaults();
    int effects = 0;
    double worst = 0.0;
    double bp_p = 0.0;
    for (const auto& [response, betas] :
         std::vector<std::pair<std::string, std::map<std::string, double>>>{{"z1", truth.beta_z1}, {"z2", truth.beta_z2}}) {
        ScratchDir out("acc_fit_" + response);
        const auto r = testing::run(
            {"fit", "--input", sim.dir.str("panel.csv"), "--response", response, "--out-dir", out.str()});
        c.expect(r.code == 0, "fit " + response + " exit " + std::to_string(r.code));
        if (r.code != 0) continue;
        for (const auto& row : testing::load_json(out.path() / "wald.json")) {
            const std::string name = row["name"];
            const auto it = betas.find(name);
            const double target = it == betas.end() ? 0.0 : it->second;
            const double dev = std::fabs(double(row["coefficient"]) - target) / double(row["se"]);
            worst = std::max(worst, dev);
            ++effects;
            c.expect(dev <= 3.0, response + " " + name + " off by " + num(dev) + " SE");
        }
        const double p = testing::load_json(out.path() / "fit.json")["fit"]["heteroscedasticity"]["p_value"];
        if (response == "z1") bp_p = p;
        c.expect(p > 0.01, response + " heteroscedasticity p " + num(p));
    }
    return c.outcome("seed " + std::to_string(truth.seed) + ", " + std::to_string(effects) +
                     " effects within " + num(worst) + " SE, z1 heteroscedasticity p " + num(bp_p));
}

Outcome diagnostics_contrast() {
    Checks c;
    auto& sim = shared_simulation();
    c.expect(sim.ok, "simulate failed");
    ScratchDir out("acc_compare");
    c.expect(testing::run({"compare", "--input", sim.dir.str("panel.csv"), "--out-dir", out.str()}).code == 0,
             "compare failed");
    const auto report = testing::load_json(out.path() / "report.json");
    std::map<std::string, nlohmann::json> fits;
    for (const auto& m : report["models"]) {
        c.expect(m["status"] == "ok", std::string(m["response"]) + " failed");
        if (m["status"] == "ok") fits[m["response"]] = m["fit"];
    }
    std::string summary;
    for (const auto& [trad, comp] : std::vector<std::pair<std::string, std::string>>{
             {"r1", "z1"}, {"r1_p", "z1"}, {"r2", "z2"}, {"r2_p", "z2"}}) {
        if (!fits.count(trad) || !fits.count(comp)) continue;
        const double bt = fits[trad]["heteroscedasticity"]["statistic"];
        const double bc = fits[comp]["heteroscedasticity"]["statistic"];
        const int ot = fits[trad]["residuals"]["outliers"];
        const int oc = fits[comp]["residuals"]["outliers"];
        c.expect(bt > bc, "BP " + trad + " " + num(bt) + " <= " + comp + " " + num(bc));
        c.expect(ot > oc, "outliers " + trad + " " + std::to_string(ot) + " <= " + comp + " " + std::to_string(oc));
        summary += (summary.empty() ? "" : ", ") + trad + "/" + comp + " BP " + num(bt) + "/" + num(bc) + " outliers " +
                   std::to_string(ot) + "/" + std::to_string(oc);
    }
    return c.outcome(summary);
}

Outcome pipeline_determinism() {
    Checks c;
    ScratchDir a("acc_det_a"), b("acc_det_b");
    for (const auto* d : {&a, &b}) {
        c.expect(testing::run({"simulate", "--out-dir", d->str(), "--seed", "777"}).code == 0, "simulate failed");
        c.expect(testing::run({"compare", "--input", d->str("panel.csv"), "--out-dir", d->str(), "--seed", "777"}).code == 0,
                 "compare failed");
    }
    int files = 0;
    for (const auto& entry : std::filesystem::directory_iterator(a.path())) {
        const auto name = entry.path().filename();
        ++files;
        c.expect(testing::slurp(entry.path()) == testing::slurp(b.path() / name), name.string() + " differs");
    }
    c.expect(files >= 10, "expected at least 10 output files, saw " + std::to_string(files));
    return c.outcome(std::to_string(files) + " files byte-identical across two runs");
}

struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<Outcome()> body;
};

}  // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {1, "coda exactness", 5.0, coda_exactness},
        {2, "skewness of traditional ratios", 5.0, skewness_pathology},
        {3, "toy outlier flip", 1.0, toy_outliers},
        {4, "lmm oracle equivalence", 30.0, lmm_oracle},
        {5, "sign reversal", 5.0, sign_reversal},
        {6, "parameter recovery", 60.0, parameter_recovery},
        {7, "diagnostics contrast", 60.0, diagnostics_contrast},
        {8, "pipeline determinism", 60.0, pipeline_determinism},
    };
    int failures = 0;
    for (const auto& cr : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = cr.body();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > cr.limit_seconds) {
            o.pass = false;
            o.detail += "; runtime over " + num(cr.limit_seconds) + " s";
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS" : "FAIL") << " [" << cr.id << "] " << cr.name << " (" << std::fixed
                  << std::setprecision(2) << secs << " s, limit " << std::setprecision(0) << cr.limit_seconds
                  << " s): " << o.detail << std::defaultfloat << '\n';
    }
    std::cout << (failures == 0 ? "all acceptance criteria passed" : std::to_string(failures) + " criteria failed")
              << '\n';
    return failures == 0 ? 0 : 1;
}
