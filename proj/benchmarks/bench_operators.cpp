// Micro-benchmarks of the per-step hot paths.

#include "sidefd/model_problem.hpp"
#include "sidefd/schemes.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace sidefd;

namespace {

struct Setup {
    ModelParams params;
    LevyMeasure m;
    Grid grid;
    Coefficients coeffs;
    CellCoefficients cc;
    GridFunction state;
    NoisePath path;
    BinnedIncrements inc;
    SchemeConfig cfg;

    explicit Setup(double h)
        : m(params.measure()),
          grid(Grid::make(h, params.domain_radius)),
          coeffs(params.coefficients(grid)),
          cc(build_cell_coefficients(m, h, params.delta)),
          state(initial_condition(params, grid)),
          path(simulate_path(m, 1.0, h * h, params.eps, 42)),
          inc(bin_increments(path, cc, h * h)) {
        cfg.h = h;
        cfg.tau = h * h;
        cfg.T = 1.0;
        cfg.delta = params.delta;
        coeffs.tables(0.0);
    }
};

Setup& setup(double h) {
    static Setup s32(0.03125);
    static Setup s64(0.015625);
    return h < 0.02 ? s64 : s32;
}

void BM_apply_Lh(benchmark::State& state) {
    Setup& s = setup(1.0 / state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_Lh(s.coeffs, 0.0, s.state));
    }
}
BENCHMARK(BM_apply_Lh)->Arg(32)->Arg(64);

void BM_apply_Ih_delta(benchmark::State& state) {
    Setup& s = setup(1.0 / state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(apply_Ih_delta(s.cc, s.state));
    }
}
BENCHMARK(BM_apply_Ih_delta)->Arg(32)->Arg(64);

void BM_itilde_plan(benchmark::State& state) {
    Setup& s = setup(1.0 / state.range(0));
    const ShiftSumPlan plan(s.grid, s.cc.zeta_bar);
    for (auto _ : state) {
        benchmark::DoNotOptimize(plan.apply(s.state));
    }
}
BENCHMARK(BM_itilde_plan)->Arg(32)->Arg(64);

void BM_shift_sum_direct(benchmark::State& state) {
    Setup& s = setup(0.03125);
    for (auto _ : state) {
        benchmark::DoNotOptimize(shift_sum_direct(s.state, s.cc.zeta_bar));
    }
}
BENCHMARK(BM_shift_sum_direct);

void BM_shift_sum_fft(benchmark::State& state) {
    Setup& s = setup(0.03125);
    for (auto _ : state) {
        benchmark::DoNotOptimize(shift_sum_fft(s.state, s.cc.zeta_bar));
    }
}
BENCHMARK(BM_shift_sum_fft);

void BM_step_explicit(benchmark::State& state) {
    Setup& s = setup(1.0 / state.range(0));
    SchemeConfig cfg = s.cfg;
    cfg.scheme = SchemeKind::Explicit;
    const ExplicitStepper stepper(cfg, s.coeffs, s.cc, s.m);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stepper.step(s.state, s.inc, 3));
    }
}
BENCHMARK(BM_step_explicit)->Arg(32)->Arg(64);

void BM_step_imex(benchmark::State& state) {
    Setup& s = setup(1.0 / state.range(0));
    SchemeConfig cfg = s.cfg;
    cfg.scheme = SchemeKind::Imex;
    const ImexStepper stepper(cfg, s.coeffs, s.cc);
    for (auto _ : state) {
        benchmark::DoNotOptimize(stepper.step(s.state, s.inc, 3));
    }
}
BENCHMARK(BM_step_imex)->Arg(32)->Arg(64);

void BM_simulate_path(benchmark::State& state) {
    const ModelParams p;
    const LevyMeasure m = p.measure();
    std::uint64_t seed = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(simulate_path(m, 1.0, 1.0 / 1024.0, p.eps, seed++));
    }
}
BENCHMARK(BM_simulate_path);

void BM_bin_increments(benchmark::State& state) {
    Setup& s = setup(0.03125);
    for (auto _ : state) {
        benchmark::DoNotOptimize(bin_increments(s.path, s.cc, s.cfg.tau));
    }
}
BENCHMARK(BM_bin_increments);

} // namespace

BENCHMARK_MAIN();
