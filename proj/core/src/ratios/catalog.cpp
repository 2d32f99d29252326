#include "codafin/ratios/catalog.hpp"

#include "codafin/error.hpp"

namespace codafin::ratios {

std::string_view to_string(Scheme scheme) { return scheme == Scheme::d3 ? "d3" : "d4"; }

Scheme parse_scheme(std::string_view text) {
    if (text == "d3" || text == "D3") return Scheme::d3;
    if (text == "d4" || text == "D4") return Scheme::d4;
    throw SpecificationError("unknown composition scheme '" + std::string(text) + "' (expected d3 or d4)");
}

std::vector<std::string> scheme_labels(Scheme scheme) {
    if (scheme == Scheme::d3) return {kShortTermLiabilities, kLongTermLiabilities, kEquity};
    return {kLongTermLiabilities, kShortTermLiabilities, kFixedAssets, kCurrentAssets};
}

coda::SbpTree liabilities_sbp() { return coda::SbpTree::parse("(STL | (LTL | EQ))"); }

coda::SbpTree balance_sheet_sbp() { return coda::SbpTree::parse("((LTL | STL) | (FA | CA))"); }

RatioSpec Catalog::find(std::string_view name) const {
    for (const auto& r : ratios) {
        if (r.name() == name) return r;
    }
    constexpr std::string_view suffix = "_p";
    if (name.size() > suffix.size() && name.substr(name.size() - suffix.size()) == suffix) {
        const auto base = name.substr(0, name.size() - suffix.size());
        for (const auto& r : ratios) {
            if (r.name() == base) return permute(r);
        }
    }
    throw LookupError("no ratio named '" + std::string(name) + "' in the " +
                      std::string(to_string(scheme)) + " catalog");
}

Catalog standard_catalog(Scheme scheme) {
    using K = RatioKind;
    if (scheme == Scheme::d3) {
        Catalog c{scheme, scheme_labels(scheme), liabilities_sbp(), {}};
        const RatioSpec r1("r1", {kShortTermLiabilities}, {kLongTermLiabilities, kEquity}, K::traditional);
        const RatioSpec r2("r2", {kLongTermLiabilities}, {kEquity}, K::traditional);
        c.ratios = {r1, permute(r1), r2, permute(r2)};
        for (std::size_t k = 0; k < c.sbp.coordinates(); ++k) {
            const auto& s = c.sbp.splits()[k];
            c.ratios.emplace_back("z" + std::to_string(k + 1), s.numerator, s.denominator, K::compositional);
        }
        return c;
    }
    Catalog c{scheme, scheme_labels(scheme), balance_sheet_sbp(), {}};
    const RatioSpec r1("r1", {kLongTermLiabilities, kShortTermLiabilities}, {kFixedAssets, kCurrentAssets},
                       K::traditional);
    c.ratios = {r1,
                RatioSpec("r2", {kLongTermLiabilities}, {kShortTermLiabilities}, K::traditional),
                RatioSpec("r3", {kFixedAssets}, {kCurrentAssets}, K::traditional),
                permute(r1)};
    for (std::size_t k = 0; k < c.sbp.coordinates(); ++k) {
        const auto& s = c.sbp.splits()[k];
        c.ratios.emplace_back("z" + std::to_string(k + 1), s.numerator, s.denominator, K::compositional);
    }
    return c;
}

RatioSpec resolve_ratio(const Catalog& catalog, std::string_view text) {
    if (text.find('=') != std::string_view::npos) return parse_ratio(text);
    return catalog.find(text);
}

}  // namespace codafin::ratios
