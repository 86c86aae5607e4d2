#include <benchmark/benchmark.h>

#include <vector>

#include "drokit/dro_inner.hpp"
#include "drokit/rng.hpp"
#include "drokit/summation.hpp"

namespace {

using namespace drokit;

struct Instance {
    std::vector<double> losses;
    std::vector<double> p;
};

Instance make_instance(std::size_t n, std::uint64_t seed) {
    Rng rng(seed);
    Instance inst;
    inst.losses.resize(n);
    inst.p.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        inst.losses[i] = uniform_range(rng, -5.0, 5.0);
        inst.p[i] = 0.25 + uniform_unit(rng);
    }
    const double total = compensated_sum(inst.p);
    for (double& w : inst.p) w /= total;
    return inst;
}

void BM_PenalizedDual(benchmark::State& state) {
    const auto kind = static_cast<DivergenceKind>(state.range(1));
    const Instance inst = make_instance(static_cast<std::size_t>(state.range(0)), 42);
    const InnerSpec spec = InnerSpec::penalized(kind, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_penalized_dual(inst.losses, inst.p, spec));
    }
}
BENCHMARK(BM_PenalizedDual)
    ->ArgsProduct({{8, 64, 512}, {0, 1, 2}})
    ->ArgNames({"support", "kind"});

void BM_ConstrainedDual(benchmark::State& state) {
    const auto kind = static_cast<DivergenceKind>(state.range(1));
    const Instance inst = make_instance(static_cast<std::size_t>(state.range(0)), 43);
    const InnerSpec spec = InnerSpec::constrained(kind, 0.1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(solve_constrained_dual(inst.losses, inst.p, spec));
    }
}
BENCHMARK(BM_ConstrainedDual)
    ->ArgsProduct({{8, 64, 512}, {0, 1, 2}})
    ->ArgNames({"support", "kind"});

void BM_PrimalOracle(benchmark::State& state) {
    const Instance inst = make_instance(6, 44);
    const InnerSpec spec = InnerSpec::penalized(DivergenceKind::Chi2, 0.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(primal_oracle(inst.losses, inst.p, spec, 7));
    }
}
BENCHMARK(BM_PrimalOracle);

} // namespace

BENCHMARK_MAIN();
