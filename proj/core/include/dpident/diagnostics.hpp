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
#ifndef DPIDENT_DIAGNOSTICS_HPP_
#define DPIDENT_DIAGNOSTICS_HPP_

#include <span>
#include <vector>

#include "dpident/data_model.hpp"
#include "dpident/kernels.hpp"
#include "dpident/rng.hpp"

namespace dpident {

// Bin edges are strictly increasing and, when cutoff-anchored, include the
// cutoff exactly so no bin straddles it. Bins are half-open [lo, hi).
struct BinSeries {
  std::vector<double> edges;
  std::vector<double> midpoints;
  std::vector<double> values;  // per-bin mean or (noised) count
  std::vector<long> counts;
};

struct McCraryResult {
  double theta_hat = 0.0;    // log f_plus - log f_minus
  double sigma_theta = 0.0;
  double t = 0.0;
  double f_plus = 0.0;
  double f_minus = 0.0;
  double first_stage_binwidth = 0.0;
};

// Density-discontinuity statistic at the cutoff: local-linear boundary
// smoothing of first-stage normalized histogram heights on each side.
// first_stage_bins <= 0 selects the ceil(2 sqrt(N)) default.
McCraryResult mccrary_statistic(std::span<const double> xs, double c, double h,
                                int first_stage_bins = 0,
                                const KernelSpec& kernel =
                                    KernelSpec{KernelId::kTriangular, 1.0, 1.0,
                                               0.0, true});

// Power of the stylized known-variance DP t-test: the statistic is
// (tau_hat + Laplace noise) / se with critical values from Monte Carlo
// quantiles of the noise-corrected null distribution.
double dp_test_power(double tau_true, double se, double noise_variance,
                     double alpha, int sims, RngStream& stream);

// Cutoff-anchored binned outcome means; empty bins carry count 0 and a NaN
// value.
BinSeries binned_means(const Dataset& data, double c, double bin_width);

// Histogram counts with Laplace(0, 2/epsilon) noise per bin (replace-one
// adjacency moves a point across bins, L1 count sensitivity 2), floored at 0.
BinSeries dp_histogram(std::span<const double> xs,
                       const std::vector<double>& edges, double epsilon,
                       RngStream& stream);

}  // namespace dpident

#endif  // DPIDENT_DIAGNOSTICS_HPP_
