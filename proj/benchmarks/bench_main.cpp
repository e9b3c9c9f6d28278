#include <benchmark/benchmark.h>

#include "ftpe/floquet.hpp"
#include "ftpe/propagator.hpp"
#include "ftpe/protocols.hpp"
#include "ftpe/sweep.hpp"
#include "ftpe/units.hpp"

using namespace ftpe;

namespace {

const LadderSystem kSys{2.82, 0.0, 0.0};

DriveSpec ftpe_drive() { return DriveSpec::symmetric(8.3 * kPi, 3.61, to_angular(3.75), -1.5); }

FrozenDrive frozen() {
  FrozenDrive fd;
  fd.f_minus = 2.0;
  fd.f_plus = 1.5;
  fd.delta = to_angular(3.75);
  return fd;
}

void BM_FinalAmplitudes(benchmark::State& state) {
  const DriveSpec d = ftpe_drive();
  PropagationOptions opts;
  opts.integrator = state.range(0) == 0 ? Integrator::kMagnus4 : Integrator::kMidpoint;
  for (auto _ : state) {
    benchmark::DoNotOptimize(final_amplitudes(kSys, d, PureState::ground(), opts));
  }
}
BENCHMARK(BM_FinalAmplitudes)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Lindblad(benchmark::State& state) {
  const LadderSystem open{2.82, 1.0 / 250.0, 1.0 / 250.0};
  const DriveSpec d = ftpe_drive();
  for (auto _ : state) {
    benchmark::DoNotOptimize(final_density_matrix(open, d, DensityMatrix::basis(kG)));
  }
}
BENCHMARK(BM_Lindblad)->Unit(benchmark::kMillisecond);

void BM_StroboscopicFromLog(benchmark::State& state) {
  const FrozenDrive fd = frozen();
  for (auto _ : state) benchmark::DoNotOptimize(stroboscopic_from_log(kSys, fd));
}
BENCHMARK(BM_StroboscopicFromLog)->Unit(benchmark::kMicrosecond);

void BM_MagnusTerms(benchmark::State& state) {
  const FrozenDrive fd = frozen();
  const int order = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(magnus_terms(kSys, fd, order));
}
BENCHMARK(BM_MagnusTerms)->DenseRange(1, 3)->Unit(benchmark::kMicrosecond);

void BM_EffectiveFields(benchmark::State& state) {
  const DriveSpec d = ftpe_drive();
  const auto grid = coarse_grid(d, 400);
  for (auto _ : state) benchmark::DoNotOptimize(effective_fields(kSys, d, grid));
}
BENCHMARK(BM_EffectiveFields)->Unit(benchmark::kMillisecond);

void BM_AdiabaticPrediction(benchmark::State& state) {
  const DriveSpec d = DriveSpec::symmetric(4.0 * kPi, 3.61, to_angular(3.75), 0.0);
  for (auto _ : state) benchmark::DoNotOptimize(tpe_adiabatic_prediction(kSys, d));
}
BENCHMARK(BM_AdiabaticPrediction)->Unit(benchmark::kMicrosecond);

void BM_GridSweep(benchmark::State& state) {
  const SweepAxis theta{SweepParam::kTheta, 0.0, 12.0 * kPi, 11};
  const SweepAxis delta{SweepParam::kDelta, 0.0, to_angular(6.0), 11};
  SweepOptions opts;
  opts.workers = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(grid_sweep(kSys, ftpe_drive(), theta, delta, opts));
}
BENCHMARK(BM_GridSweep)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace
BENCHMARK_MAIN();
