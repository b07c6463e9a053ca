#include <benchmark/benchmark.h>

#include "dyadic/integrator.hpp"
#include "dyadic/stationary.hpp"

namespace {

dyadic::ShellVector envelope_data(const dyadic::ModelParams& p, int n_modes) {
    const double eps = 0.9 * dyadic::compute_constants(p).eps_init;
    dyadic::ShellVector a(static_cast<std::size_t>(n_modes));
    for (int n = 1; n <= n_modes; ++n) a[n - 1] = eps * p.envelope_scale(n);
    return a;
}

void BM_RhsViscous(benchmark::State& state) {
    const dyadic::ModelParams p(2.0, 2.5);
    const dyadic::ShellVector a = envelope_data(p, static_cast<int>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dyadic::rhs_viscous(p, a));
    }
}
BENCHMARK(BM_RhsViscous)->Arg(12)->Arg(24)->Arg(48);

void BM_Integrate(benchmark::State& state) {
    const dyadic::ModelParams p(2.0, 2.5);
    const int n = static_cast<int>(state.range(0));
    const dyadic::ShellVector a = envelope_data(p, n);
    dyadic::IntegratorConfig cfg;
    cfg.t_end = 1.0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            dyadic::integrate(p, a, cfg, dyadic::SystemKind::Viscous));
    }
}
BENCHMARK(BM_Integrate)->Arg(8)->Arg(16)->Arg(24)->Unit(benchmark::kMillisecond);

void BM_Shoot(benchmark::State& state) {
    const dyadic::ModelParams p(2.0, 2.5);
    const int depth = static_cast<int>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(dyadic::shoot(p, depth));
    }
}
BENCHMARK(BM_Shoot)->Arg(10)->Arg(20)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
