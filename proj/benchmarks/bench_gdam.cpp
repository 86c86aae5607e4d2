#include <benchmark/benchmark.h>

#include "drokit/gdam.hpp"
#include "drokit/problems.hpp"

namespace {

using namespace drokit;

void BM_StochasticGdamAirfoil(benchmark::State& state) {
    const auto problem = airfoil_surrogate(3);
    const EmpiricalDistribution dist(problem->default_scenarios());
    const RobustnessSpec spec =
        RobustnessSpec::dro_penalized(DivergenceKind::Chi2, 0.001);
    GdamConfig config;
    config.batch_size = static_cast<std::size_t>(state.range(0));
    config.max_iters = 64;
    config.beta = 1e-3;
    config.stall_window = 16;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            run_stochastic_gdam(*problem, dist, spec, config, problem->default_start()));
    }
    state.SetItemsProcessed(state.iterations() * config.max_iters);
}
BENCHMARK(BM_StochasticGdamAirfoil)->Arg(8)->Arg(16)->Arg(64)->ArgNames({"batch"});

void BM_DeterministicGdamQuadratic(benchmark::State& state) {
    const auto problem = constrained_quadratic(0.0);
    const RobustnessSpec spec = RobustnessSpec::deterministic(problem->default_nominal());
    GdamConfig config;
    config.max_iters = 256;
    config.beta = 1e-3;
    config.stall_window = 32;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            run_deterministic_gdam(*problem, spec, config, problem->default_start()));
    }
    state.SetItemsProcessed(state.iterations() * config.max_iters);
}
BENCHMARK(BM_DeterministicGdamQuadratic);

} // namespace
