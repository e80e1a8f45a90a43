// Serial reference vs OpenMP kernels. Arguments are problem sizes; the backend is the
// second argument (0 = serial, 1 = omp).

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "tlq/kernels.hpp"
#include "tlq/ladder.hpp"
#include "tlq/quantum.hpp"
#include "tlq/spectral.hpp"

using namespace tlq;

namespace {

Backend backend_of(const benchmark::State& state) { return state.range(1) == 0 ? Backend::serial : Backend::omp; }

std::vector<double> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<double> v(n);
  for (double& x : v) x = d(rng);
  return v;
}

void chain_args(benchmark::internal::Benchmark* b) {
  for (long n : {1L << 12, 1L << 16, 1L << 20})
    for (long backend : {0L, 1L}) b->Args({n, backend});
}

void BM_chain_force(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> phi = random_vector(n, 1);
  std::vector<double> f(n);
  for (auto _ : state) {
    kernels::chain_force(backend_of(state), phi, 1.3, f);
    benchmark::DoNotOptimize(f.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_chain_force)->Apply(chain_args);

void BM_kick_drift(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::vector<double> x = random_vector(n, 2), p = random_vector(n, 3);
  const std::vector<double> f = random_vector(n, 4), m(n, 0.5);
  for (auto _ : state) {
    kernels::kick(backend_of(state), p, f, 1e-3);
    kernels::drift(backend_of(state), x, p, m, 1e-3);
    benchmark::ClobberMemory();
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_kick_drift)->Apply(chain_args);

void BM_chain_energy(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const std::vector<double> x = random_vector(n, 5), p = random_vector(n, 6), m(n, 0.5);
  for (auto _ : state) benchmark::DoNotOptimize(kernels::chain_energy(backend_of(state), x, p, m, 1.3));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_chain_energy)->Apply(chain_args);

CircuitTopology lc() {
  CircuitTopology t;
  t.node_count = 1;
  t.capacitors.push_back({1, 2, 1.0});
  t.inductors.push_back({1, 2, 1.0});
  t.coupling_capacitance = 0.42857142857142855;
  return t;
}

void BM_ladder_step(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  LadderSystem ladder(line_from_impedance(2.0, 1.0), lc(), n, 30.0);
  ladder.x()[n / 2] = 1.0;
  const double h = 0.5 * ladder.stable_step();
  for (auto _ : state) ladder.step(h, backend_of(state));
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}
BENCHMARK(BM_ladder_step)->Args({4000, 0})->Args({4000, 1})->Args({1 << 18, 0})->Args({1 << 18, 1});

// Propagator columns are parallel over unit vectors; the inner steps use the given backend.
void BM_ladder_propagator(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const LadderSystem ladder(line_from_impedance(2.0, 1.0), lc(), n, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(propagator_of(ladder, 1.0, 0.005, backend_of(state)).matrix.data());
}
BENCHMARK(BM_ladder_propagator)->Args({100, 0})->Args({100, 1})->Unit(benchmark::kMillisecond);

void BM_pole_locus(benchmark::State& state) {
  const std::vector<double> grid = uniform_grid(1e-4, 0.9999, 1e-4);
  for (auto _ : state) benchmark::DoNotOptimize(pole_locus(0.5, grid).branches.data());
}
BENCHMARK(BM_pole_locus)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
