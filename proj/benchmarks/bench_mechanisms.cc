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

#include "dpident/data_model.hpp"
#include "dpident/mechanisms.hpp"
#include "dpident/rng.hpp"

namespace {

dpident::Dataset make_data(int n) {
  dpident::RngStream stream(1, 0);
  std::vector<double> x(static_cast<std::size_t>(n));
  for (double& v : x) v = stream.uniform01();
  return dpident::Dataset::univariate(std::move(x));
}

void BM_LaplaceMean(benchmark::State& state) {
  const dpident::Dataset data = make_data(static_cast<int>(state.range(0)));
  dpident::RngStream stream(2, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dpident::laplace_mean_dp(data, 1.0, stream).estimate);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_LaplaceMean)->Arg(100)->Arg(10000);

void BM_BernoulliLaplaceMean(benchmark::State& state) {
  const dpident::Dataset data = make_data(static_cast<int>(state.range(0)));
  dpident::RngStream stream(3, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dpident::bernoulli_laplace_mean(data, 0.5, 1.0, stream).estimate);
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BernoulliLaplaceMean)->Arg(100)->Arg(10000);

void BM_BernoulliLaplaceEpsilon(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dpident::bernoulli_laplace_epsilon(1000, 0.5, 0.3));
  }
}
BENCHMARK(BM_BernoulliLaplaceEpsilon);

void BM_AuditLaplace(benchmark::State& state) {
  std::vector<double> x(20, 0.25);
  const dpident::Dataset d = dpident::Dataset::univariate(x);
  x[0] = 1.0;
  const dpident::Dataset d_prime = dpident::Dataset::univariate(x);
  auto mech = [](const dpident::Dataset& data, dpident::RngStream& s) {
    return dpident::laplace_mean_dp(data, 1.0, s).estimate;
  };
  for (auto _ : state) {
    dpident::RngStream stream(4, static_cast<std::uint64_t>(state.iterations()));
    benchmark::DoNotOptimize(
        dpident::audit_dp(mech, d, d_prime, 10000, 0.0, stream).epsilon_hat);
  }
}
BENCHMARK(BM_AuditLaplace)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
