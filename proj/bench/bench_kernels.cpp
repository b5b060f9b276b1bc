// Serial reference kernels against their OpenMP versions on ladder-sized
// problems. Thread count follows OMP_NUM_THREADS.
#include <benchmark/benchmark.h>

#include <memory>
#include <random>
#include <vector>

#include "ladder/hamiltonian.hpp"
#include "ladder/kernels.hpp"
#include "ladder/observables.hpp"

using namespace ladder;

namespace {

// Sizes by argument: L_s = N with n_max = min(N, 4).
struct Problem {
  explicit Problem(int rungs)
      : basis(LadderGeometry{rungs}, rungs, std::min(rungs, 4)), h(HamiltonianParams{}, basis) {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    x.amplitudes.resize(basis.dimension());
    for (auto& a : x.amplitudes) a = {g(rng), g(rng)};
    y.assign(basis.dimension(), {});
  }

  kernels::CsrView csr() const {
    const auto& a = h.static_part();
    return {a.dimension(), a.row_ptr().data(), a.cols().data(), a.values().data()};
  }

  FockBasis basis;
  BiasedHamiltonian h;
  StateVector x;
  std::vector<Complex> y;
};

Problem& problem(int rungs) {
  static std::vector<std::unique_ptr<Problem>> cache(16);
  if (!cache[rungs]) cache[rungs] = std::make_unique<Problem>(rungs);
  return *cache[rungs];
}

void set_counters(benchmark::State& state, const Problem& p) {
  state.counters["dim"] = static_cast<double>(p.basis.dimension());
  state.counters["nnz"] = static_cast<double>(p.h.static_part().nnz());
}

void BM_SpmvSerial(benchmark::State& state) {
  auto& p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::spmv_serial(p.csr(), p.h.bias_diagonal(), 0.7, p.x.amplitudes, p.y);
    benchmark::DoNotOptimize(p.y.data());
  }
  set_counters(state, p);
}

void BM_SpmvOmp(benchmark::State& state) {
  auto& p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    kernels::spmv_omp(p.csr(), p.h.bias_diagonal(), 0.7, p.x.amplitudes, p.y);
    benchmark::DoNotOptimize(p.y.data());
  }
  set_counters(state, p);
}

void BM_DotSerial(benchmark::State& state) {
  auto& p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot_serial(p.x.amplitudes, p.x.amplitudes));
  set_counters(state, p);
}

void BM_DotOmp(benchmark::State& state) {
  auto& p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(kernels::dot_omp(p.x.amplitudes, p.x.amplitudes));
  set_counters(state, p);
}

void BM_ObdmSerial(benchmark::State& state) {
  auto& p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(one_body_density_matrix_serial(p.x, p.basis, Leg::Left));
  set_counters(state, p);
}

void BM_ObdmOmp(benchmark::State& state) {
  auto& p = problem(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(one_body_density_matrix(p.x, p.basis, Leg::Left));
  set_counters(state, p);
}

}  // namespace

BENCHMARK(BM_SpmvSerial)->DenseRange(4, 7);
BENCHMARK(BM_SpmvOmp)->DenseRange(4, 7);
BENCHMARK(BM_DotSerial)->DenseRange(4, 7);
BENCHMARK(BM_DotOmp)->DenseRange(4, 7);
BENCHMARK(BM_ObdmSerial)->DenseRange(4, 6);
BENCHMARK(BM_ObdmOmp)->DenseRange(4, 6);

BENCHMARK_MAIN();
