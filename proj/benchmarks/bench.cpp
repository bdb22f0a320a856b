#include <benchmark/benchmark.h>

#include "ilab/links.hpp"
#include "ilab/matrix.hpp"
#include "ilab/rmt.hpp"
#include "ilab/sde.hpp"

using namespace ilab;

static void BM_HpDrift(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sde::SdeSpec spec;
  spec.kind = sde::Kind::hp;
  spec.params = {0.0, 0.0, n};
  std::vector<double> x(n), out(n);
  for (int i = 0; i < n; ++i) x[i] = -2.0 + 4.0 * i / (n - 1);
  for (auto _ : state) {
    sde::drift(spec, x, out);
    benchmark::DoNotOptimize(out.data());
  }
}
BENCHMARK(BM_HpDrift)->Arg(4)->Arg(32)->Arg(200);

static void BM_HaarUnitary(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RandomStream rng(1);
  for (auto _ : state) benchmark::DoNotOptimize(rmt::haar_unitary(n, rng));
}
BENCHMARK(BM_HaarUnitary)->Arg(2)->Arg(4)->Arg(8);

static void BM_LinkSample(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  RandomStream rng(2);
  WeylPoint x;
  x.values.resize(n + 1);
  for (int i = 0; i <= n; ++i) x.values[i] = i;
  for (auto _ : state) benchmark::DoNotOptimize(links::link_sample(x, rng));
}
BENCHMARK(BM_LinkSample)->Arg(2)->Arg(4);

static void BM_MatrixStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  matrix::MatrixSdeSpec spec;
  spec.n = n;
  spec.params = {0.0, 0.0, n};
  RandomStream rng(3);
  rmt::HermitianMatrix x = rmt::gue_sample(n, 1.0, rng);
  for (auto _ : state) {
    x = matrix::matrix_step(x, spec, rng);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_MatrixStep)->Arg(3)->Arg(8);

static void BM_SdeAdvanceMacroStep(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  sde::SdeSpec spec;
  spec.kind = sde::Kind::hp;
  spec.params = {0.0, 0.0, n};
  spec.dt_base = 1e-3;
  RandomStream rng(4);
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = -2.0 + 4.0 * i / (n - 1);
  sde::Stepper st(spec, n);
  for (auto _ : state) {
    st.advance(x, 1e-3, rng);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_SdeAdvanceMacroStep)->Arg(4)->Arg(16);

BENCHMARK_MAIN();
