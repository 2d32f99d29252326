#include "codafin/simulate/toy.hpp"

#include "codafin/ratios/ratio_spec.hpp"

namespace codafin::sim {

std::vector<ToyCompany> toy_dataset() {
    return {
        {1, 130, 100}, {2, 110, 160}, {3, 50, 250}, {4, 300, 60}, {5, 170, 120},
        {6, 60, 90},   {7, 190, 140}, {8, 150, 200}, {9, 100, 75}, {10, 85, 110},
    };
}

ToyAnalysis analyze_toy() {
    using ratios::RatioKind;
    using ratios::RatioSpec;
    ToyAnalysis out;
    out.companies = toy_dataset();
    const RatioSpec a("ratio_a", {"x1"}, {"x2"}, RatioKind::traditional);
    const RatioSpec z("balance", {"x1"}, {"x2"}, RatioKind::compositional);
    const RatioSpec b = ratios::permute(a);
    const RatioSpec zp = ratios::permute(z);

    auto series = [&](const RatioSpec& spec) {
        ToySeries s;
        for (const auto& c : out.companies) s.values.push_back(ratios::evaluate(spec, coda::Composition({c.x1, c.x2})));
        s.summary = stats::tukey_outliers(s.values);
        for (std::size_t i : s.summary.outlier_indices) s.outlier_companies.push_back(out.companies[i].company);
        return s;
    };
    out.ratio_a = series(a);
    out.ratio_b = series(b);
    out.balance = series(z);
    out.balance_permuted = series(zp);
    return out;
}

}  // namespace codafin::sim
