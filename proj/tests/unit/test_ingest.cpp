#include "codafin/error.hpp"
#include "codafin/ingest/config.hpp"
#include "codafin/ingest/panel.hpp"

#include <doctest.h>

#include <fstream>
#include <sstream>

using namespace codafin;
using namespace codafin::ingest;

namespace {

std::string fixture(const std::string& name) {
    std::ifstream in(std::string(CODAFIN_FIXTURE_DIR) + "/" + name, std::ios::binary);
    REQUIRE(in);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PanelDataset parse_text(const std::string& text, const IngestConfig& cfg = IngestConfig::defaults()) {
    std::istringstream in(text);
    return parse_panel_csv(in, cfg);
}

}  // namespace

TEST_CASE("well-formed panel parses and writes back byte-identical") {
    const std::string text = fixture("panel_small.csv");
    const auto panel = parse_text(text);
    REQUIRE(panel.rows.size() == 5);
    CHECK(panel.rejected.empty());
    CHECK(panel.data_lines == 5);
    CHECK(panel.has_family);
    CHECK_FALSE(panel.has_assets);

    const auto& r = panel.rows[2];
    CHECK(r.firm_id == "12");
    CHECK(r.year == 2007);
    CHECK(r.family == false);
    CHECK(r.tech_intensity == TechIntensity::high);
    CHECK(r.equity == 43000.125);
    CHECK(r.line == 4);
    CHECK(r.key() == "12:2007");

    std::ostringstream out;
    write_panel_csv(out, panel);
    CHECK(out.str() == text);
}

TEST_CASE("dirty rows are rejected with reasons and the rest kept") {
    const auto panel = parse_text(fixture("panel_dirty.csv"));
    std::vector<std::string> kept;
    for (const auto& r : panel.rows) kept.push_back(r.key());
    CHECK(kept == std::vector<std::string>{"7:2010", "14:2011"});

    REQUIRE(panel.rejected.size() == 8);
    const auto& rj = panel.rejected;
    CHECK(rj[0].line == 3);
    CHECK(rj[0].reason == reason::non_positive_component);
    CHECK(rj[0].field == "equity");
    CHECK(rj[1].line == 4);
    CHECK(rj[1].reason == reason::duplicate_key);
    CHECK(rj[2].reason == reason::unparsable_number);
    CHECK(rj[2].field == "stl");
    CHECK(rj[3].reason == reason::wrong_field_count);
    CHECK(rj[4].reason == reason::empty_line);
    CHECK(rj[5].reason == reason::invalid_value);
    CHECK(rj[5].field == "tech_intensity");
    CHECK(rj[6].reason == reason::non_positive_component);
    CHECK(rj[6].field == "ltl");
    CHECK(rj[7].reason == reason::invalid_value);
    CHECK(rj[7].field == "year");

    CHECK(panel.rows[1].innovation);
    CHECK(panel.rows[1].family == false);
    CHECK(panel.rows[1].stl == 1000.0);

    std::ostringstream out;
    write_rejections_jsonl(out, panel.rejected);
    std::istringstream lines(out.str());
    std::string line;
    int count = 0;
    while (std::getline(lines, line)) {
        ++count;
        CHECK(line.find("\"reason\"") != std::string::npos);
    }
    CHECK(count == 8);
}

TEST_CASE("missing required column raises before rows are read") {
    const std::string text = "firm_id,year,family,tech_intensity,innovation,employees,stl,ltl\n1,2007,1,low,0,5,1,2\n";
    try {
        (void)parse_text(text);
        FAIL("expected SchemaError");
    } catch (const SchemaError& e) {
        CHECK(std::string(e.what()).find("equity") != std::string::npos);
    }
    CHECK_THROWS_AS((void)parse_text(""), SchemaError);
}

TEST_CASE("optional columns") {
    const auto no_family = parse_text("firm_id,year,tech_intensity,innovation,employees,stl,ltl,equity\n"
                                      "a,2007,0,0,4,1,2,3\n");
    REQUIRE(no_family.rows.size() == 1);
    CHECK_FALSE(no_family.has_family);
    CHECK_FALSE(no_family.rows[0].family.has_value());

    const auto assets = parse_text(fixture("panel_assets.csv"));
    CHECK(assets.has_assets);
    const auto c = to_composition(assets.rows[0], ratios::Scheme::d4);
    CHECK(c.labels() == std::vector<std::string>{"LTL", "STL", "FA", "CA"});
    CHECK(c.part("FA") == 350.0);
    CHECK(to_composition(assets.rows[0], ratios::Scheme::d3).part("EQ") == 300.0);

    const auto small = parse_text(fixture("panel_small.csv"));
    CHECK_THROWS_AS((void)to_composition(small.rows[0], ratios::Scheme::d4), SchemeError);

    std::ostringstream out;
    write_panel_csv(out, assets);
    CHECK(out.str() == fixture("panel_assets.csv"));
}

TEST_CASE("column mapping config") {
    std::istringstream cfg_text("# export from survey\n"
                                "firm_id = IDEMP\n"
                                "  stl=PASCORTO  \n"
                                "\n"
                                "year_min = 2000\n");
    const auto cfg = IngestConfig::parse(cfg_text);
    CHECK(cfg.column(Field::firm_id) == "IDEMP");
    CHECK(cfg.column(Field::stl) == "PASCORTO");
    CHECK(cfg.column(Field::ltl) == "ltl");
    CHECK(cfg.year_min == 2000);

    const auto panel = parse_text("IDEMP,year,family,tech_intensity,innovation,employees,PASCORTO,ltl,equity\n"
                                  "1,1999,1,low,0,5,1,2,3\n"
                                  "1,2001,1,low,0,5,1,2,3\n",
                                  cfg);
    REQUIRE(panel.rows.size() == 1);
    CHECK(panel.rows[0].year == 2001);
    CHECK(panel.rejected[0].field == "year");

    std::istringstream bad_key("colour = red\n");
    CHECK_THROWS_AS((void)IngestConfig::parse(bad_key), ConfigError);
    std::istringstream bad_line("firm_id IDEMP\n");
    CHECK_THROWS_AS((void)IngestConfig::parse(bad_line), ConfigError);
    std::istringstream bad_year("year_min = soon\n");
    try {
        (void)IngestConfig::parse(bad_year);
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(e.field() == "year_min");
    }
    std::istringstream bad_range("year_min = 2010\nyear_max = 2000\n");
    CHECK_THROWS_AS((void)IngestConfig::parse(bad_range), ConfigError);

    CHECK(parse_field("current_assets") == Field::current_assets);
    CHECK_FALSE(parse_field("assets").has_value());
    CHECK_FALSE(is_required(Field::family));
    CHECK(is_required(Field::equity));
}

TEST_CASE("CRLF, BOM and quoted fields") {
    const auto panel = parse_text("\xEF\xBB\xBF" "firm_id,year,family,tech_intensity,innovation,employees,stl,ltl,equity\r\n"
                                  "\"Acme, Ltd\",2007,true,2,false,10,1.5,2.5,3.5\r\n");
    REQUIRE(panel.rows.size() == 1);
    CHECK(panel.rows[0].firm_id == "Acme, Ltd");
    CHECK(panel.rows[0].tech_intensity == TechIntensity::high);
    CHECK(panel.rows[0].equity == 3.5);
}

TEST_CASE("number formatting") {
    CHECK(format_number(120.0) == "120");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1.25e16) == "1.25e+16");
    CHECK(format_number(210000.5) == "210000.5");
}

TEST_CASE("rows with unknown ownership status are rejected, not assigned a group") {
    const auto panel = parse_text("firm_id,year,family,tech_intensity,innovation,employees,stl,ltl,equity\n"
                                  "1,2007,1,low,0,10,1,2,3\n"
                                  "2,2007,,low,0,10,1,2,3\n"
                                  "3,2007,0,low,0,10,1,2,3\n");
    CHECK(panel.rows.size() == 2);
    REQUIRE(panel.rejected.size() == 1);
    CHECK(panel.rejected[0].reason == reason::missing_field);
    CHECK(panel.rejected[0].field == "family");
    // family + non-family counts need not add up to the number of data lines
    CHECK(panel.data_lines == 3);
}
