#include <benchmark/benchmark.h>

#include <random>

#include "lqsn/moment_sim.hpp"
#include "lqsn/optics.hpp"
#include "lqsn/random_systems.hpp"
#include "lqsn/state_space.hpp"
#include "lqsn/synthesis.hpp"

using namespace lqsn;

namespace {

OscillatorParams sample_system(int n, int m) {
  std::mt19937_64 rng(12345);
  RandomOscillatorOptions options;
  options.n = n;
  options.m = m;
  options.random_scattering = true;
  return random_oscillator(rng, options);
}

void BM_DecomposeReassemble(benchmark::State& state) {
  const auto g = sample_system(int(state.range(0)), 2);
  for (auto _ : state) {
    auto rebuilt = reassemble(decompose(g));
    benchmark::DoNotOptimize(rebuilt);
  }
}
BENCHMARK(BM_DecomposeReassemble)->Arg(2)->Arg(4)->Arg(8);

void BM_StateSpaceRoundTrip(benchmark::State& state) {
  const auto g = sample_system(int(state.range(0)), 2);
  for (auto _ : state) {
    auto recovered = from_state_space(to_state_space(g));
    benchmark::DoNotOptimize(recovered);
  }
}
BENCHMARK(BM_StateSpaceRoundTrip)->Arg(2)->Arg(4)->Arg(8);

void BM_CovarianceTrajectory(benchmark::State& state) {
  const auto ss = to_state_space(sample_system(int(state.range(0)), 2));
  const RMat m0 = RMat::Identity(2 * ss.n, 2 * ss.n);
  const auto table = ito_table_vacuum(ss.m);
  for (auto _ : state) {
    auto traj = covariance_trajectory(ss, m0, 1.0, 1e-3, table);
    benchmark::DoNotOptimize(traj);
  }
}
BENCHMARK(BM_CovarianceTrajectory)->Arg(1)->Arg(3)->Arg(5);

void BM_PassiveMesh(benchmark::State& state) {
  std::mt19937_64 rng(7);
  const CMat s = random_unitary(rng, int(state.range(0)));
  for (auto _ : state) {
    auto mesh = passive_unitary_to_mesh(s);
    benchmark::DoNotOptimize(mesh);
  }
}
BENCHMARK(BM_PassiveMesh)->Arg(2)->Arg(4)->Arg(8);

}  // namespace

BENCHMARK_MAIN();
