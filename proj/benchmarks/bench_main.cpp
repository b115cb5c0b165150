#include <benchmark/benchmark.h>

#include <numbers>
#include <vector>

#include "ttorsion/landau.hpp"
#include "ttorsion/model.hpp"
#include "ttorsion/model_kernel.hpp"
#include "ttorsion/pgrading.hpp"
#include "ttorsion/theta.hpp"

namespace {

const double kTwoPi = 2.0 * std::numbers::pi;

ttorsion::TorusModel line_model() {
  return ttorsion::TorusModel(ttorsion::CurvatureSpectrum({kTwoPi}, 1.0, 1),
                              ttorsion::ThreeForm(1));
}

ttorsion::TorusModel surface_model(double b) {
  ttorsion::ThreeForm B(2);
  if (b != 0.0) B.set(0, 1, 2, b);
  return ttorsion::TorusModel(ttorsion::CurvatureSpectrum({kTwoPi, kTwoPi}, 1.0, 1), B);
}

void BM_LocalDensity(benchmark::State& state) {
  ttorsion::CurvatureSpectrum spec({0.9, 3.1, 7.4}, 1.0, 1);
  double u = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ttorsion::local_density(u, spec));
    u = u < 4.0 ? u * 1.01 : 0.05;
  }
}
BENCHMARK(BM_LocalDensity);

void BM_TraceForm(benchmark::State& state) {
  ttorsion::CurvatureSpectrum spec({0.9, 3.1, 7.4}, 1.0, 1);
  double u = 0.05;
  for (auto _ : state) {
    benchmark::DoNotOptimize(ttorsion::trace_form(u, spec));
    u = u < 4.0 ? u * 1.01 : 0.05;
  }
}
BENCHMARK(BM_TraceForm);

void BM_AssembleDiracSquared(benchmark::State& state) {
  const ttorsion::TorusModel model = surface_model(0.5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ttorsion::assemble_dirac_squared(model));
  }
}
BENCHMARK(BM_AssembleDiracSquared);

void BM_ParametrixLine(benchmark::State& state) {
  const ttorsion::SymbolicOperator op = ttorsion::assemble_dirac_squared(line_model());
  const int jmax = static_cast<int>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ttorsion::parametrix_coefficients(op, jmax));
  }
}
BENCHMARK(BM_ParametrixLine)->Arg(2)->Arg(3)->Arg(4);

void BM_SpectrumClosedForm(benchmark::State& state) {
  const ttorsion::TorusModel model = surface_model(0.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ttorsion::landau_spectrum(model, 16, 24));
  }
}
BENCHMARK(BM_SpectrumClosedForm);

void BM_SpectrumLadder(benchmark::State& state) {
  const ttorsion::TorusModel model = surface_model(0.5);
  const int K = static_cast<int>(state.range(0));
  // Loose tail tolerance: the benchmark times the eigensolve, and shallow
  // truncations cannot certify the production tolerance.
  for (auto _ : state) {
    benchmark::DoNotOptimize(ttorsion::landau_spectrum(model, 4, K, 1e-3));
  }
}
BENCHMARK(BM_SpectrumLadder)->Arg(12)->Arg(16)->Unit(benchmark::kMillisecond);

void BM_HeatSupertrace(benchmark::State& state) {
  const ttorsion::SpectralData data = ttorsion::landau_spectrum(surface_model(0.5), 4, 24);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ttorsion::heat_supertrace(data, 0.5));
  }
}
BENCHMARK(BM_HeatSupertrace);

void BM_ThetaPrime(benchmark::State& state) {
  const ttorsion::TorusModel model = line_model();
  const int p = 16;
  const ttorsion::SpectralData data = ttorsion::landau_spectrum(model, p, 20);
  const ttorsion::HeatTraceExpansion expansion = ttorsion::beta_coefficients(model, p, 3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ttorsion::theta_prime_zero(model, p, data, expansion));
  }
}
BENCHMARK(BM_ThetaPrime)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
