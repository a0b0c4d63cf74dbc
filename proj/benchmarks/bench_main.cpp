// Microbenchmarks for the hot paths: basis construction, realization draws,
// field evaluation, both reconstruction paths, and pilot estimation.

#include <benchmark/benchmark.h>

#include <complex>
#include <memory>

#include "faslab/aperture.hpp"
#include "faslab/field.hpp"
#include "faslab/pilot.hpp"
#include "faslab/reconstruction.hpp"
#include "faslab/rng.hpp"

namespace {

using namespace faslab;

std::shared_ptr<const SpectralBasis> basis_for(Dimensionality dim) {
  FieldConfig config;
  config.dim = dim;
  config.length_x = 32;
  config.length_y = 32;
  return SpectralBasis::make(config);
}

void bm_basis_construction_2d(benchmark::State& state) {
  FieldConfig config;
  config.dim = Dimensionality::two_d;
  config.length_x = static_cast<int>(state.range(0));
  config.length_y = config.length_x;
  for (auto _ : state) benchmark::DoNotOptimize(SpectralBasis::make(config));
}
BENCHMARK(bm_basis_construction_2d)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void bm_realization_draw(benchmark::State& state) {
  const auto basis = basis_for(state.range(0) == 1 ? Dimensionality::one_d
                                                   : Dimensionality::two_d);
  std::uint64_t seed = 1;
  for (auto _ : state) benchmark::DoNotOptimize(FieldRealization(basis, seed++));
}
BENCHMARK(bm_realization_draw)->Arg(1)->Arg(2)->Unit(benchmark::kMicrosecond);

void bm_evaluate_grid_2d(benchmark::State& state) {
  const auto basis = basis_for(Dimensionality::two_d);
  const FieldRealization field(basis, 7);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  const DenseGrid grid =
      DenseGrid::over(box, sampling_distance(2.0, 0), sampling_distance(2.0, 0),
                      static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(field.evaluate_grid(grid.xs, grid.ys));
}
BENCHMARK(bm_evaluate_grid_2d)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void bm_reconstruct_kernel_2d(benchmark::State& state) {
  const auto basis = basis_for(Dimensionality::two_d);
  const FieldRealization field(basis, 7);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  const double distance = sampling_distance(2.0, 0);
  const SampleSet samples = observe_spacing(field, box, distance);
  const DenseGrid grid = DenseGrid::over(box, distance, distance,
                                         static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct(samples, grid));
}
BENCHMARK(bm_reconstruct_kernel_2d)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void bm_reconstruct_dft_2d(benchmark::State& state) {
  const auto basis = basis_for(Dimensionality::two_d);
  const FieldRealization field(basis, 7);
  const ApertureSpec box = ApertureSpec::symmetric(Dimensionality::two_d, 2.0);
  const double distance = sampling_distance(2.0, 0);
  const SampleSet samples = observe_spacing(field, box, distance);
  const DenseGrid grid = DenseGrid::over(box, distance, distance,
                                         static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(reconstruct_dft(samples, grid));
}
BENCHMARK(bm_reconstruct_dft_2d)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

void bm_estimate_channel(benchmark::State& state) {
  PilotConfig config;
  config.pilots_per_sample = static_cast<int>(state.range(0));
  config.snr = 100.0;
  Rng rng(11);
  const std::complex<double> h{0.3, -0.7};
  for (auto _ : state) benchmark::DoNotOptimize(estimate_channel(h, config, rng));
}
BENCHMARK(bm_estimate_channel)->Arg(1)->Arg(7)->Arg(16)->Unit(benchmark::kNanosecond);

}  // namespace

BENCHMARK_MAIN();
