#include "codafin/coda/balance.hpp"
#include "codafin/error.hpp"
#include "codafin/ingest/panel.hpp"
#include "codafin/lmm/model_frame.hpp"
#include "codafin/lmm/reml.hpp"
#include "codafin/ratios/catalog.hpp"
#include "codafin/simulate/rng.hpp"
#include "codafin/simulate/simulator.hpp"
#include "codafin/simulate/toy.hpp"
#include "codafin/stats/descriptive.hpp"

#include <doctest.h>

#include <cmath>
#include <set>
#include <sstream>

using namespace codafin;
using namespace codafin::sim;

namespace {

SimConfig small_config(std::uint64_t seed) {
    auto c = SimConfig::defaults();
    c.n_firms = 40;
    c.years = 4;
    c.seed = seed;
    return c;
}

std::string panel_text(const SimulatedPanel& s) {
    std::ostringstream out;
    ingest::write_panel_csv(out, s.panel);
    return out.str();
}

}  // namespace

TEST_CASE("rng streams are reproducible") {
    Rng a(42), b(42), c(43);
    for (int i = 0; i < 100; ++i) {
        const auto x = a.next();
        CHECK(x == b.next());
        CHECK(x != c.next());
    }
    // splitmix64 reference outputs for state 0
    std::uint64_t state = 0;
    CHECK(splitmix64(state) == 0xe220a8397b1dcdafULL);
    CHECK(splitmix64(state) == 0x6e789e6aa1b965f4ULL);

    Rng u(7);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double z = u.normal();
        sum += z;
        sq += z * z;
    }
    CHECK(std::fabs(sum / n) < 0.01);
    CHECK(std::fabs(sq / n - 1.0) < 0.02);
    for (int i = 0; i < 1000; ++i) {
        const double v = u.uniform();
        CHECK(v > 0.0);
        CHECK(v < 1.0);
    }
}

TEST_CASE("same seed gives byte-identical panels") {
    const auto a = gen_panel(small_config(5));
    const auto b = gen_panel(small_config(5));
    const auto c = gen_panel(small_config(6));
    CHECK(panel_text(a) == panel_text(b));
    CHECK(a.truth.to_json().dump() == b.truth.to_json().dump());
    CHECK(panel_text(a) != panel_text(c));
    CHECK(a.panel.rows.size() == 160);
    CHECK(a.panel.rows.front().firm_id == "F0001");
    CHECK(a.panel.rows.front().year == 2007);
    CHECK(a.panel.rows.back().year == 2010);
}

TEST_CASE("generated rows are valid and reproduce their balances") {
    const auto s = gen_panel(small_config(9));
    const auto sbp = ratios::liabilities_sbp();
    REQUIRE(s.truth.z.size() == s.panel.rows.size());
    for (std::size_t i = 0; i < s.panel.rows.size(); ++i) {
        const auto& r = s.panel.rows[i];
        CHECK(r.stl > 0.0);
        CHECK(r.ltl > 0.0);
        CHECK(r.equity > 0.0);
        CHECK(r.employees >= 1.0);
        CHECK(r.employees == std::round(r.employees));
        CHECK(r.family.has_value());
        const auto z = coda::ilr(ingest::to_composition(r, ratios::Scheme::d3), sbp);
        CHECK(std::fabs(z.values[0] - s.truth.z[i][0]) < 1e-10);
        CHECK(std::fabs(z.values[1] - s.truth.z[i][1]) < 1e-10);
    }
    // written panel re-parses to the same rows
    std::istringstream in(panel_text(s));
    const auto back = ingest::parse_panel_csv(in);
    CHECK(back.rows.size() == s.panel.rows.size());
    CHECK(back.rejected.empty());
}

TEST_CASE("zero noise and zero effects give identical shares") {
    auto c = small_config(3);
    c.beta_z1.clear();
    c.beta_z2.clear();
    c.sigma_u = 0.0;
    c.sigma_e = 0.0;
    const auto s = gen_panel(c);
    for (const auto& r : s.panel.rows) {
        const double total = r.stl + r.ltl + r.equity;
        CHECK(r.stl / total == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
        CHECK(r.ltl / total == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    }
}

TEST_CASE("config parsing and validation") {
    std::istringstream in("n_firms = 12\nyears=3\nbeta.z1.Family = -0.2\nbeta.z2.Year2008 = 0.1\nseed = 99\n");
    const auto c = SimConfig::parse(in);
    CHECK(c.n_firms == 12);
    CHECK(c.years == 3);
    CHECK(c.beta_z1.at("Family") == -0.2);
    CHECK(c.beta_z1.at("FirmSize") == SimConfig::defaults().beta_z1.at("FirmSize"));
    CHECK(c.beta_z2.at("Year2008") == 0.1);
    CHECK(c.seed == 99);
    CHECK(c.to_json()["n_firms"] == 12);

    std::istringstream bad("sigma_u = -1\n");
    CHECK_THROWS_AS((void)SimConfig::parse(bad), ConfigError);
    std::istringstream unknown("colour = 1\n");
    try {
        (void)SimConfig::parse(unknown);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "colour");
    }
    std::istringstream bad_beta("beta.z3.Family = 1\n");
    CHECK_THROWS_AS((void)SimConfig::parse(bad_beta), ConfigError);
    std::istringstream bad_num("family_share = often\n");
    CHECK_THROWS_AS((void)SimConfig::parse(bad_num), ConfigError);
}

TEST_CASE("random-intercept variance is recovered at panel scale") {
    auto c = SimConfig::defaults();
    const auto s = gen_panel(c);
    const auto cat = ratios::standard_catalog(ratios::Scheme::d3);
    const auto built = lmm::build_design(s.panel, cat.find("z1"), ratios::Scheme::d3);
    const auto fit = lmm::fit_reml(built.frame);
    const double su2 = c.sigma_u * c.sigma_u;
    CHECK(std::fabs(fit.sigma2_u - su2) < 0.2 * su2);
    CHECK(std::fabs(fit.sigma2_e - c.sigma_e * c.sigma_e) < 0.1 * c.sigma_e * c.sigma_e);
}

TEST_CASE("lognormal compositions") {
    const auto a = lognormal_compositions(50, 10.0, 1.0, 4);
    const auto b = lognormal_compositions(50, 10.0, 1.0, 4);
    REQUIRE(a.size() == 50);
    CHECK(a[0].labels() == std::vector<std::string>{"STL", "LTL", "EQ"});
    for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t k = 0; k < 3; ++k) {
            CHECK(a[i].parts()[k] > 0.0);
            CHECK(a[i].parts()[k] == b[i].parts()[k]);
        }
    }
}

TEST_CASE("toy fixture shows the ratio-direction outlier flip") {
    const auto t = analyze_toy();
    CHECK(t.companies.size() == 10);
    CHECK(t.ratio_a.outlier_companies == std::vector<int>{4});
    CHECK(t.ratio_b.outlier_companies == std::vector<int>{3});
    CHECK(t.balance.outlier_companies == t.balance_permuted.outlier_companies);
    CHECK_FALSE(t.balance.outlier_companies.empty());
    for (std::size_t i = 0; i < t.companies.size(); ++i) {
        CHECK(t.ratio_a.values[i] * t.ratio_b.values[i] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(t.balance_permuted.values[i] == -t.balance.values[i]);
    }
}
