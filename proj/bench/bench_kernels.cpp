// Serial reference vs OpenMP for each parallel kernel. Arg 0 = serial, 1 = parallel.

#include <benchmark/benchmark.h>

#include "cwl/experiments.hpp"
#include "cwl/opdam_kernel.hpp"
#include "cwl/plancherel.hpp"
#include "cwl/wave_energy.hpp"

using namespace cwl;

namespace {

Exec mode(const benchmark::State& s) { return s.range(0) ? Exec::parallel : Exec::serial; }

void label(benchmark::State& s) { s.SetLabel(s.range(0) ? "parallel" : "serial"); }

RootSystem make(const char* fam, std::vector<double> k) { return RootSystem::build(parse_family(fam), k); }

void BM_KernelTable(benchmark::State& s) {
  const RankOneConfig c = RankOneConfig::from(make("A1", {0.5}));
  std::vector<cplx> lambdas;
  for (int i = 0; i < 32; ++i) lambdas.emplace_back(0.6 * i - 9.0, 9.0 - 0.55 * i);
  std::vector<double> xs;
  for (int j = 0; j <= 100; ++j) xs.push_back(-4.0 + 0.08 * j);
  for (auto _ : s) benchmark::DoNotOptimize(build_kernel_table(c, lambdas, xs, 4.0, mode(s)));
  label(s);
}

void BM_TransformMany(benchmark::State& s) {
  const RankOneTransform tr(make("A1", {0.5}), 1.0);
  const auto suite = bump_suite(1.0);
  std::vector<cplx> lambdas;
  for (int i = 0; i < 64; ++i) lambdas.emplace_back(0.5 * i, 0.0);
  for (auto _ : s) benchmark::DoNotOptimize(tr.transform_many(suite, lambdas, mode(s)));
  label(s);
}

void BM_DensityAgreement(benchmark::State& s) {
  const SpectralDensity d(make("B2", {1, 2}));
  for (auto _ : s) benchmark::DoNotOptimize(density_form_agreement(d, 500, 1, 10.0, mode(s)));
  label(s);
}

void BM_FoldedDensity(benchmark::State& s) {
  const SpectralDensity d(make("A2", {0.5}));
  for (auto _ : s) benchmark::DoNotOptimize(FoldedDensity(d, 6.0, 16, 0.5, 24, mode(s)));
  label(s);
}

const ModelProfileSource& model() {
  static const ModelProfileSource src(make("A1", {0.5}), RadialProfile(1.0, 12, 1), RadialProfile(0.8, 12, 1));
  return src;
}

const GridSpec kGrid{30.0, oscillatory_panel(8.0), 16, 8};

void BM_BuildState(benchmark::State& s) {
  for (auto _ : s) benchmark::DoNotOptimize(build_state(model(), kGrid, mode(s)));
  label(s);
}

void BM_EnergyTrace(benchmark::State& s) {
  const SpectralState st = build_state(model(), kGrid);
  const RadialDensities dens = radial_densities(model(), kGrid);
  const auto times = linear_times(0.0, 8.0, 50);
  for (auto _ : s) benchmark::DoNotOptimize(energy_trace(st, dens, times, mode(s)));
  label(s);
}

}  // namespace

BENCHMARK(BM_KernelTable)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TransformMany)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DensityAgreement)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_FoldedDensity)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_BuildState)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_EnergyTrace)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
