// Serial reference against the OpenMP kernel on the linear-boundary problem.
#include <benchmark/benchmark.h>

#include "maxstop/montecarlo.hpp"

namespace {

using namespace maxstop;

StoppingProblem linear_problem() {
    return {DiffusionSpec::brownian(), RewardSpec::identity(), CostSpec::constant(0.5), 0.0, 0.0};
}

Boundary linear_boundary() {
    return Boundary::tabulate([](double s) { return s - 1.0; }, 0.0, 40.0, 2);
}

SimulationConfig config(std::int64_t n) {
    SimulationConfig c;
    c.n_paths = n;
    c.dt = 1e-3;
    c.t_max = 50.0;
    return c;
}

void BM_simulate_serial(benchmark::State& state) {
    auto p = linear_problem();
    auto g = linear_boundary();
    auto c = config(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate_serial(p, g, c).tau.mean);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

void BM_simulate_openmp(benchmark::State& state) {
    auto p = linear_problem();
    auto g = linear_boundary();
    auto c = config(state.range(0));
    for (auto _ : state) benchmark::DoNotOptimize(simulate(p, g, c).tau.mean);
    state.SetItemsProcessed(state.iterations() * state.range(0));
}

}  // namespace

BENCHMARK(BM_simulate_serial)->Arg(2000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_simulate_openmp)->Arg(2000)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
