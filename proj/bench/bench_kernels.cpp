// Copyright 2026 The Coarselab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Serial reference vs OpenMP kernels on the workloads that dominate the
// experiment pipeline: blockwise norm tables, dense products, and a
// full extraction run.

#include <benchmark/benchmark.h>

#include "coarselab/harness.hpp"
#include "coarselab/rng.hpp"

namespace {

using namespace coarselab;

Operator dense_unitary(int n, std::uint64_t seed) {
  const LFCMPtr sp = gen_space(SpaceKind::RandomGeometric, n, 1, seed);
  const Module u = uniform_module(sp);
  const Scale diam = sp->base()->diameter();
  return random_controlled_unitary(u, diam, seed);
}

void BM_block_norm_table(benchmark::State& state, kernels::Exec exec) {
  const int n = static_cast<int>(state.range(0));
  const Operator t = dense_unitary(n, 21);
  for (auto _ : state) {
    benchmark::DoNotOptimize(block_norms(t, exec));
  }
  state.SetComplexityN(n);
}

void BM_matmul(benchmark::State& state, kernels::Exec exec) {
  const int n = static_cast<int>(state.range(0));
  Rng rng(9);
  Matrix a(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  Matrix b(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (auto& z : a.data()) z = rng.complex_gaussian();
  for (auto& z : b.data()) z = rng.complex_gaussian();
  for (auto _ : state) {
    benchmark::DoNotOptimize(kernels::matmul(a, b, exec));
  }
}

void BM_extraction(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.kind = SpaceKind::RandomGeometric;
  cfg.size = static_cast<int>(state.range(0));
  cfg.distortion = 2;
  cfg.scramble_prop = 1;
  cfg.seed = 5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(run_experiment(cfg));
  }
}

}  // namespace

BENCHMARK_CAPTURE(BM_block_norm_table, serial, coarselab::kernels::Exec::Serial)
    ->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_block_norm_table, parallel,
                  coarselab::kernels::Exec::Parallel)
    ->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_matmul, serial, coarselab::kernels::Exec::Serial)
    ->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_matmul, parallel, coarselab::kernels::Exec::Parallel)
    ->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_extraction)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
