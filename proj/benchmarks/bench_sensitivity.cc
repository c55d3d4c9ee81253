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

#include <optional>

#include "dpident/sensitivity.hpp"
#include "dpident/stats.hpp"

namespace {

void BM_BoundarySensitivityClosedForm(benchmark::State& state) {
  const dpident::KernelSpec uni =
      dpident::make_kernel(dpident::KernelId::kUniform);
  const dpident::Interval unit{0.0, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dpident::nr_boundary_sensitivity(uni, unit, unit, 10, 10, 100).value);
  }
}
BENCHMARK(BM_BoundarySensitivityClosedForm);

void BM_BruteForceWeightedMean(benchmark::State& state) {
  auto estimator = [](const dpident::Dataset& d) -> std::optional<double> {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i) {
      num += d.w()[i] * d.x()[i];
      den += d.w()[i];
    }
    if (!(den > 0.0)) return std::nullopt;
    return num / den;
  };
  dpident::SensitivityGrid grid;
  grid.x = {0.0, 0.5, 1.0};
  grid.w = {0.5, 1.0};
  for (auto _ : state) {
    benchmark::DoNotOptimize(dpident::brute_force_sensitivity(
        estimator, dpident::DatasetShape::kWeighted, grid,
        static_cast<int>(state.range(0))));
  }
}
BENCHMARK(BM_BruteForceWeightedMean)->Arg(3)->Arg(5)->Unit(benchmark::kMicrosecond);

void BM_NoiseCorrectedCritical(benchmark::State& state) {
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        dpident::normal_laplace_two_sided_critical(0.05, 1.0, 0.05));
  }
}
BENCHMARK(BM_NoiseCorrectedCritical);

}  // namespace

BENCHMARK_MAIN();
