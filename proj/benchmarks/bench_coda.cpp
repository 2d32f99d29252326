#include "codafin/coda/balance.hpp"
#include "codafin/ratios/catalog.hpp"
#include "codafin/simulate/simulator.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace codafin;

void BM_IlrD3(benchmark::State& state) {
    const auto comps = sim::lognormal_compositions(1024, 10.0, 1.0, 1);
    const auto sbp = ratios::liabilities_sbp();
    std::size_t i = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(coda::ilr(comps[i++ & 1023], sbp));
    }
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IlrD3);

void BM_IlrInverseD4(benchmark::State& state) {
    const auto sbp = ratios::balance_sheet_sbp();
    const std::vector<double> z = {0.3, -0.7, 1.1};
    for (auto _ : state) benchmark::DoNotOptimize(coda::ilr_inverse(z, sbp));
    state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_IlrInverseD4);

void BM_CatalogEvaluate(benchmark::State& state) {
    const auto comps = sim::lognormal_compositions(1024, 10.0, 1.0, 2);
    const auto cat = ratios::standard_catalog(ratios::Scheme::d3);
    std::size_t i = 0;
    for (auto _ : state) {
        const auto& x = comps[i++ & 1023];
        for (const auto& r : cat.ratios) benchmark::DoNotOptimize(ratios::evaluate(r, x));
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(cat.ratios.size()));
}
BENCHMARK(BM_CatalogEvaluate);

}  // namespace
