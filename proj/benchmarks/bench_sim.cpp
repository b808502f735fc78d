#include <benchmark/benchmark.h>

#include "mgsim/config.hpp"
#include "mgsim/control.hpp"
#include "mgsim/engine.hpp"
#include "mgsim/plant.hpp"
#include "mgsim/transforms.hpp"

using namespace mgsim;

namespace {

void BM_ClarkePark(benchmark::State& state) {
    Abc x{311.0, -155.5, -155.5};
    double theta = 0.0;
    for (auto _ : state) {
        theta += 1e-3;
        Dq dq = park(clarke(x), theta);
        benchmark::DoNotOptimize(dq);
        AlphaBeta back = inv_park(dq, theta);
        benchmark::DoNotOptimize(back);
    }
}
BENCHMARK(BM_ClarkePark);

void BM_ResonatorStep(benchmark::State& state) {
    PrPair pr(PrParams{0.2, 100.0, 314.159265, 0.01}, 5e-5);
    double u = 0.3;
    for (auto _ : state) {
        u = -u;
        benchmark::DoNotOptimize(pr.step({u, -u}));
    }
}
BENCHMARK(BM_ResonatorStep);

void BM_ResonatorRetune(benchmark::State& state) {
    PrPair pr(PrParams{0.2, 100.0, 314.159265, 0.01}, 5e-5);
    double w = 314.0;
    for (auto _ : state) {
        w += 1e-6;
        pr.tune(w);
        benchmark::DoNotOptimize(pr);
    }
}
BENCHMARK(BM_ResonatorRetune);

void BM_Rk4Step(benchmark::State& state) {
    const PlantParams p{0.003, 4.8162e-6, 0.001, 145.2, 800.0, 0.0};
    PlantState s;
    s.vc = {10.0, -5.0, -5.0};
    const Abc v{100.0, -50.0, -50.0};
    for (auto _ : state) {
        s = rk4_step(s, v, p, 1e-6);
        benchmark::DoNotOptimize(s);
    }
}
BENCHMARK(BM_Rk4Step);

void BM_PwmSwitching(benchmark::State& state) {
    PlantParams p{0.003, 4.8162e-6, 0.001, 145.2, 800.0, 10000.0};
    double t = 0.0;
    for (auto _ : state) {
        t += 1e-6;
        benchmark::DoNotOptimize(pwm_stage({300.0, -150.0, -150.0}, p, t));
    }
}
BENCHMARK(BM_PwmSwitching);

void BM_Scenario(benchmark::State& state) {
    FullConfig fc = default_config();
    fc.plant.fsw = state.range(0) ? 10000.0 : 0.0;
    fc.t_end = 0.05;
    fc.record_decimation = 10;
    const ScenarioConfig cfg = to_scenario(fc, Frame::StationaryAB);
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_scenario(cfg));
    }
    state.SetLabel(state.range(0) ? "switching" : "averaged");
}
BENCHMARK(BM_Scenario)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
