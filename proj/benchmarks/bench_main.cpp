#include "silag/exact_riemann.hpp"
#include "silag/implicit_step.hpp"
#include "silag/problems.hpp"
#include "silag/timestepping.hpp"

#include <benchmark/benchmark.h>

namespace {

void bm_implicit_step(benchmark::State& bench) {
    const auto n = static_cast<std::size_t>(bench.range(0));
    const double cfl = static_cast<double>(bench.range(1));
    auto setup = silag::instantiate(silag::find_problem("sod"), n);
    silag::refresh_pressure(setup.state, setup.mesh);
    const silag::SolverKnobs knobs;
    const double dt = silag::compute_dt(setup.state, setup.mesh, cfl);
    for (auto _ : bench) {
        silag::State next = silag::implicit_euler_step(setup.state, setup.mesh, dt, knobs);
        benchmark::DoNotOptimize(next.V.data());
    }
    bench.SetItemsProcessed(static_cast<int64_t>(bench.iterations()) *
                            static_cast<int64_t>(n));
}
BENCHMARK(bm_implicit_step)
    ->Args({1024, 1})
    ->Args({1024, 10})
    ->Args({16384, 1})
    ->Args({16384, 10})
    ->Unit(benchmark::kMicrosecond);

void bm_exact_riemann(benchmark::State& bench) {
    const silag::MaterialParams air{1.4, 0.0, 0};
    const silag::RiemannSide left{1.0, 0.0, 1.0, air};
    const silag::RiemannSide right{0.125, 0.0, 0.1, air};
    for (auto _ : bench) {
        const silag::StarState star = silag::solve_star(left, right);
        benchmark::DoNotOptimize(star.p_star);
    }
}
BENCHMARK(bm_exact_riemann);

void bm_target_filter(benchmark::State& bench) {
    const auto n = static_cast<std::size_t>(bench.range(0));
    auto setup = silag::instantiate(silag::find_problem("sod"), n);
    for (auto _ : bench) {
        auto filtered = silag::target_filtered_volume(setup.state.V, setup.mesh);
        benchmark::DoNotOptimize(filtered.data());
    }
}
BENCHMARK(bm_target_filter)->Arg(16384)->Unit(benchmark::kMicrosecond);

} // namespace

BENCHMARK_MAIN();
