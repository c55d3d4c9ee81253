//
// Copyright 2026 The dpident Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
#include <benchmark/benchmark.h>

#include "dpident/montecarlo.hpp"
#include "dpident/rdd.hpp"

namespace {

void BM_LocalLinearSharp(benchmark::State& state) {
  dpident::RngStream stream(1, 0);
  const dpident::Dataset data =
      dpident::scenario1_dgp(static_cast<int>(state.range(0)), stream);
  const dpident::KernelSpec tri =
      dpident::make_kernel(dpident::KernelId::kTriangular);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dpident::local_linear_sharp(data, 0.0, tri, 0.2).tau_hat);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LocalLinearSharp)->Arg(500)->Arg(5000);

void BM_IkBandwidth(benchmark::State& state) {
  dpident::RngStream stream(2, 0);
  const dpident::Dataset data =
      dpident::scenario1_dgp(static_cast<int>(state.range(0)), stream);
  const dpident::KernelSpec tri =
      dpident::make_kernel(dpident::KernelId::kTriangular);
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpident::ik_bandwidth(data, 0.0, tri));
  }
}
BENCHMARK(BM_IkBandwidth)->Arg(500)->Arg(5000);

void BM_BoundaryRegression(benchmark::State& state) {
  dpident::RngStream stream(3, 0);
  const dpident::Dataset data =
      dpident::scenario1_dgp(static_cast<int>(state.range(0)), stream);
  const dpident::KernelSpec uni =
      dpident::make_kernel(dpident::KernelId::kUniform);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dpident::nr_boundary_estimate(data, 0.0, uni, 0.2).tau_hat);
  }
}
BENCHMARK(BM_BoundaryRegression)->Arg(5000);

void BM_RejectionCell(benchmark::State& state) {
  dpident::ScenarioConfig config;
  config.sims = 50;
  config.n_values = {500};
  config.noise_variances = {2.0};
  config.alphas = {0.05};
  config.threads = 1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dpident::run_rejection_table(config).cells.front().rejection_rate);
  }
}
BENCHMARK(BM_RejectionCell)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
