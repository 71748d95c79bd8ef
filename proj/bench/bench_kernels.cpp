// Serial reference vs OpenMP kernels.

#include "arratia/flow.hpp"
#include "arratia/mc_exit.hpp"
#include "arratia/parallel.hpp"
#include "arratia/pde.hpp"
#include "arratia/series.hpp"

#include <benchmark/benchmark.h>

using namespace arratia;

namespace {

const DriftSpec& drift()
{
    static const DriftSpec d = DriftSpec::tanh(0.5, 1);
    return d;
}

pde::RotatedGrid grid() { return pde::RotatedGrid::for_problem(drift(), 0.5, {0, 0}, 0.04); }

void BM_pde_reference(benchmark::State& st)
{
    const auto g = grid();
    for (auto _ : st)
        benchmark::DoNotOptimize(pde::solve_reference(drift(), 0.5, g).values.data());
}

void BM_pde_solve(benchmark::State& st)
{
    parallel::set_threads(static_cast<int>(st.range(0)));
    const auto g = grid();
    for (auto _ : st)
        benchmark::DoNotOptimize(pde::solve(drift(), 0.5, g).values.data());
}

void BM_mc_reference(benchmark::State& st)
{
    mc::PathConfig c;
    c.n_paths = 20000;
    for (auto _ : st)
        benchmark::DoNotOptimize(mc::survival_reference(WedgePoint(0, 0.2), 1.0, drift(), c).p_hat);
}

void BM_mc_survival(benchmark::State& st)
{
    parallel::set_threads(static_cast<int>(st.range(0)));
    mc::PathConfig c;
    c.n_paths = 20000;
    for (auto _ : st)
        benchmark::DoNotOptimize(mc::survival(WedgePoint(0, 0.2), 1.0, drift(), c).p_hat);
}

void BM_flow_runs(benchmark::State& st)
{
    parallel::set_threads(static_cast<int>(st.range(0)));
    flow::FlowConfig c;
    c.n_runs = 16;
    c.exec = st.range(0) == 0 ? parallel::Exec::serial : parallel::Exec::parallel;
    for (auto _ : st)
        benchmark::DoNotOptimize(flow::simulate_runs(drift(), c).size());
}

void BM_series_term(benchmark::State& st)
{
    parallel::set_threads(std::max<int>(1, static_cast<int>(st.range(0))));
    series::Config c;
    c.samples = 100000;
    c.exec = st.range(0) == 0 ? parallel::Exec::serial : parallel::Exec::parallel;
    for (auto _ : st)
        benchmark::DoNotOptimize(series::density_term(3, 0.0, 1.0, drift(), c).value);
}

} // namespace

BENCHMARK(BM_pde_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pde_solve)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_reference)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_mc_survival)->Arg(1)->Arg(2)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_flow_runs)->Arg(0)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_series_term)->Arg(0)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
