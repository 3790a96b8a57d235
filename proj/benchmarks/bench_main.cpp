// Microbenchmarks for the hot paths: root continuation, quadrature, the
// shooting integrator, and the Stokes tracer.

#include <benchmark/benchmark.h>

#include <complex>
#include <vector>

#include <ptwell/action.hpp>
#include <ptwell/potential.hpp>
#include <ptwell/shooting.hpp>
#include <ptwell/stokes.hpp>
#include <ptwell/turning.hpp>
#include <ptwell/wkb.hpp>

namespace {

using ptwell::Complex;

const ptwell::Potential& harm() {
  static const ptwell::Potential pot({{1.0, 2}}, {{1.0, 1}}, 0.5,
                                     ptwell::Window{{-300.0, 300.0}, {-50.0, 50.0}});
  return pot;
}

const ptwell::Potential& mix() {
  static const ptwell::Potential pot({{1.0, 2}, {0.1, 4}}, {{1.0, 1}}, 0.5,
                                     ptwell::Window{{-300.0, 300.0}, {-50.0, 50.0}});
  return pot;
}

void BM_turning_continuation(benchmark::State& state) {
  const Complex e(0.52, 0.03);
  for (auto _ : state)
    benchmark::DoNotOptimize(ptwell::find_turning_pair(mix(), e, 0.15));
}
BENCHMARK(BM_turning_continuation);

void BM_turning_seeded(benchmark::State& state) {
  const Complex e(0.52, 0.03);
  const auto tp = ptwell::find_turning_pair(mix(), e, 0.15);
  const ptwell::TurningSeed seed{tp.alpha, tp.beta};
  for (auto _ : state)
    benchmark::DoNotOptimize(ptwell::find_turning_pair(mix(), e, 0.15, seed));
}
BENCHMARK(BM_turning_seeded);

void BM_action_quadrature(benchmark::State& state) {
  const auto tp = ptwell::find_turning_pair(mix(), 0.5, 0.1);
  for (auto _ : state)
    benchmark::DoNotOptimize(ptwell::action_integral(mix(), 0.5, 0.1, tp,
                                                     static_cast<int>(state.range(0))));
}
BENCHMARK(BM_action_quadrature)->Arg(64)->Arg(256);

void BM_wronskian_shot(benchmark::State& state) {
  for (auto _ : state)
    benchmark::DoNotOptimize(ptwell::wronskian(harm(), 0.37, 0.1, 0.1, 0.0));
}
BENCHMARK(BM_wronskian_shot);

void BM_stokes_connector(benchmark::State& state) {
  const auto tp = ptwell::find_turning_pair(harm(), 1.0, 0.2);
  const ptwell::Window win{{-3.0, 3.0}, {-2.0, 2.0}};
  const Complex dir(-1.0, 0.0);
  for (auto _ : state)
    benchmark::DoNotOptimize(ptwell::trace_line(harm(), 1.0, 0.2, tp,
                                                tp.beta + 1e-3 * dir, dir,
                                                ptwell::LineKind::Stokes, 50.0, win));
}
BENCHMARK(BM_stokes_connector);

void BM_transport_solve(benchmark::State& state) {
  const auto tp = ptwell::find_turning_pair(harm(), 1.0, 0.0);
  const std::vector<double> grid{2.0, 3.0, 5.0, 8.0};
  for (auto _ : state)
    benchmark::DoNotOptimize(
        ptwell::transport_coeffs(harm(), 1.0, 0.0, tp, 2, grid, -1.0, 60.0, 8192));
}
BENCHMARK(BM_transport_solve);

}  // namespace

BENCHMARK_MAIN();
