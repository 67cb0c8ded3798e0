#include "harvest/entanglement.hpp"
#include "harvest/quadrature.hpp"
#include "harvest/saddle.hpp"
#include "harvest/scan.hpp"

#include <benchmark/benchmark.h>

using namespace harvest;

namespace {

GridSpec spec(Scenario s, Method m, int n, int threads)
{
    GridSpec g;
    g.scenario = s;
    g.method = m;
    g.a_n = g.w_n = n;
    g.threads = threads;
    return g;
}

void BM_grid_saddle_serial(benchmark::State& st)
{
    const GridSpec g = spec(Scenario::ParallelAccel, Method::Saddle, static_cast<int>(st.range(0)), 1);
    for (auto _ : st)
        benchmark::DoNotOptimize(grid_scan_serial(g));
}
BENCHMARK(BM_grid_saddle_serial)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_grid_saddle_parallel(benchmark::State& st)
{
    const GridSpec g = spec(Scenario::ParallelAccel, Method::Saddle, static_cast<int>(st.range(0)), 0);
    for (auto _ : st)
        benchmark::DoNotOptimize(grid_scan(g));
}
BENCHMARK(BM_grid_saddle_parallel)->Arg(50)->Arg(200)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_grid_quadrature_serial(benchmark::State& st)
{
    const GridSpec g = spec(Scenario::ParallelAccel, Method::Quadrature, 20, 1);
    for (auto _ : st)
        benchmark::DoNotOptimize(grid_scan_serial(g));
}
BENCHMARK(BM_grid_quadrature_serial)->Unit(benchmark::kMillisecond);

void BM_grid_quadrature_parallel(benchmark::State& st)
{
    const GridSpec g = spec(Scenario::ParallelAccel, Method::Quadrature, 20, 0);
    for (auto _ : st)
        benchmark::DoNotOptimize(grid_scan(g));
}
BENCHMARK(BM_grid_quadrature_parallel)->Unit(benchmark::kMillisecond)->UseRealTime();

void BM_a_shifted(benchmark::State& st)
{
    const auto cfg = config_from_point(Scenario::ParallelAccel, 1.0, 1.2, 0.01);
    for (auto _ : st)
        benchmark::DoNotOptimize(a_shifted(cfg));
}
BENCHMARK(BM_a_shifted)->Unit(benchmark::kMicrosecond);

void BM_assemble_antiparallel(benchmark::State& st)
{
    const auto cfg = config_from_point(Scenario::AntiParallelAccel, 1.5, 1.2, 0.01);
    const Method m = st.range(0) ? Method::Quadrature : Method::Saddle;
    for (auto _ : st)
        benchmark::DoNotOptimize(assemble(cfg, m));
}
BENCHMARK(BM_assemble_antiparallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

} // namespace

BENCHMARK_MAIN();
