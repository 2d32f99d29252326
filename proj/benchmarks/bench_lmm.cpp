#include "codafin/lmm/model_frame.hpp"
#include "codafin/lmm/reml.hpp"
#include "codafin/ratios/catalog.hpp"
#include "codafin/simulate/simulator.hpp"

#include <benchmark/benchmark.h>

namespace {

using namespace codafin;

lmm::ModelFrame panel_frame(std::size_t firms) {
    auto cfg = sim::SimConfig::defaults();
    cfg.n_firms = firms;
    const auto s = sim::gen_panel(cfg);
    const auto cat = ratios::standard_catalog(ratios::Scheme::d3);
    return lmm::build_design(s.panel, cat.find("z1"), ratios::Scheme::d3).frame;
}

void BM_FitReml(benchmark::State& state) {
    const auto frame = panel_frame(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) benchmark::DoNotOptimize(lmm::fit_reml(frame));
    state.counters["rows"] = static_cast<double>(frame.n_rows());
}
BENCHMARK(BM_FitReml)->Arg(100)->Arg(500)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_ProfiledLoglik(benchmark::State& state) {
    const auto frame = panel_frame(500);
    for (auto _ : state) benchmark::DoNotOptimize(lmm::profiled_loglik(frame, 1.7));
}
BENCHMARK(BM_ProfiledLoglik)->Unit(benchmark::kMicrosecond);

void BM_BuildDesign(benchmark::State& state) {
    const auto s = sim::gen_panel(sim::SimConfig::defaults());
    const auto spec = ratios::standard_catalog(ratios::Scheme::d3).find("r1");
    for (auto _ : state) benchmark::DoNotOptimize(lmm::build_design(s.panel, spec, ratios::Scheme::d3));
}
BENCHMARK(BM_BuildDesign)->Unit(benchmark::kMillisecond);

}  // namespace
