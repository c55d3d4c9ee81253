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
#ifndef DPIDENT_STATS_HPP_
#define DPIDENT_STATS_HPP_

#include <cstddef>
#include <functional>
#include <vector>

namespace dpident {

double normal_cdf(double x);
// Log of the standard normal CDF, accurate deep in the lower tail.
double log_normal_cdf(double x);
// Wichura's AS 241 (PPND16) inverse normal CDF.
double normal_quantile(double p);

double laplace_cdf(double x, double location, double scale);

// CDF at s of sigma*Z + Laplace(0, b) with Z standard normal. Degenerate
// cases (sigma == 0 or b == 0) fall back to the single-family CDF.
double normal_laplace_cdf(double s, double sigma, double b);

// Two-sided critical value: smallest c with P(|sigma*Z + Lap(0,b)| > c) <= alpha.
double normal_laplace_two_sided_critical(double sigma, double b, double alpha);

// Adaptive Simpson on [a, b] to absolute tolerance tol.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol);

// Root of a monotone continuous f on [lo, hi] by bisection; f(lo), f(hi) must
// bracket zero.
double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol);

// Minimizer of a strictly convex f on [lo, hi] by golden-section search.
double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double xtol);

double mean(const std::vector<double>& v);
double sample_sd(const std::vector<double>& v);

// Reference distribution for empirical-CDF distances: a right-continuous CDF
// plus the locations of its atoms (jump points), if any.
struct ReferenceCdf {
  std::function<double(double)> cdf;
  std::vector<double> atoms;
};

// sup_t |Fhat(t) - F(t)| for the empirical CDF of `sample`.
double kolmogorov_distance(std::vector<double> sample, const ReferenceCdf& ref);

// Levy distance between the empirical CDF of `sample` and the reference; the
// metric that metrizes weak convergence, so it behaves sensibly when the
// reference has atoms the sample only approaches (e.g. a point-mass limit).
double levy_distance(std::vector<double> sample, const ReferenceCdf& ref);

// Two-sample Levy distance between empirical CDFs.
double levy_distance_two_sample(std::vector<double> a, std::vector<double> b);

// Solves A x = b for small dense systems (row-major A) by partial-pivot
// Gaussian elimination. Returns false when a pivot falls below tol.
bool solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n,
                 std::vector<double>* x, double pivot_tol = 1e-13);

}  // namespace dpident

#endif  // DPIDENT_STATS_HPP_
