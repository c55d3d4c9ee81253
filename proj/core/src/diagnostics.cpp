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
#include "dpident/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "dpident/errors.hpp"
#include "dpident/stats.hpp"

namespace dpident {

namespace {

// Local-linear boundary smoother evaluated at the cutoff: the weighted
// average sum_j K_j (S2 - S1 u_j) / (S2 S0 - S1^2) y_j over one side's
// (midpoint, height) pairs.
double boundary_density(const std::vector<double>& u,
                        const std::vector<double>& y, const KernelSpec& kernel,
                        double h) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0;
  std::vector<double> k(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) {
    k[j] = eval_kernel(kernel, u[j] / h);
    s0 += k[j];
    s1 += k[j] * u[j];
    s2 += k[j] * u[j] * u[j];
  }
  const double det = s2 * s0 - s1 * s1;
  if (!(det > 0.0)) {
    throw NonpositiveDensityError(
        "degenerate boundary smoother (too few populated bins in the window)");
  }
  double f = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    f += k[j] * (s2 - s1 * u[j]) / det * y[j];
  }
  return f;
}

}  // namespace

McCraryResult mccrary_statistic(std::span<const double> xs, double c, double h,
                                int first_stage_bins, const KernelSpec& kernel) {
  const std::size_t n = xs.size();
  if (n < 4) {
    throw std::invalid_argument("mccrary_statistic needs at least 4 points");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("mccrary_statistic requires h > 0");
  }
  bool left = false, right = false;
  double lo = xs[0], hi = xs[0];
  for (double x : xs) {
    left = left || x < c;
    right = right || x > c;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  if (!left || !right) {
    throw NonpositiveDensityError("all mass on one side of the cutoff");
  }

  if (first_stage_bins <= 0) {
    first_stage_bins =
        static_cast<int>(std::ceil(2.0 * std::sqrt(static_cast<double>(n))));
  }
  // Cutoff-anchored first-stage histogram: width from the requested bin count
  // over the data range, edges placed so c is an edge.
  const double width = (hi - lo) / static_cast<double>(first_stage_bins);
  const long j_lo = static_cast<long>(std::floor((lo - c) / width));
  const long j_hi = static_cast<long>(std::ceil((hi - c) / width));
  const std::size_t bins = static_cast<std::size_t>(j_hi - j_lo) + 1;
  std::vector<double> counts(bins, 0.0);
  for (double x : xs) {
    long j = static_cast<long>(std::floor((x - c) / width)) - j_lo;
    j = std::max(0L, std::min(static_cast<long>(bins) - 1, j));
    counts[static_cast<std::size_t>(j)] += 1.0;
  }
  std::vector<double> ul, yl, ur, yr;
  for (std::size_t j = 0; j < bins; ++j) {
    const double mid = c + (static_cast<double>(j_lo + static_cast<long>(j)) + 0.5) * width;
    const double height = counts[j] / (static_cast<double>(n) * width);
    if (mid > c) {
      ur.push_back(mid - c);
      yr.push_back(height);
    } else {
      ul.push_back(mid - c);
      yl.push_back(height);
    }
  }

  McCraryResult res;
  res.first_stage_binwidth = width;
  res.f_plus = boundary_density(ur, yr, kernel, h);
  res.f_minus = boundary_density(ul, yl, kernel, h);
  if (!(res.f_plus > 0.0) || !(res.f_minus > 0.0)) {
    throw NonpositiveDensityError("boundary density estimate is nonpositive");
  }
  res.theta_hat = std::log(res.f_plus) - std::log(res.f_minus);
  res.sigma_theta = std::sqrt((1.0 / (static_cast<double>(n) * h)) * (24.0 / 5.0)) *
                    (1.0 / res.f_plus + 1.0 / res.f_minus);
  res.t = res.theta_hat / res.sigma_theta;
  return res;
}

double dp_test_power(double tau_true, double se, double noise_variance,
                     double alpha, int sims, RngStream& stream) {
  if (sims < 500) {
    throw std::invalid_argument("dp_test_power requires sims >= 500");
  }
  if (!(se > 0.0) || !(noise_variance >= 0.0) || !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("dp_test_power: invalid parameters");
  }
  const double noise_scale = std::sqrt(noise_variance / 2.0);

  // Monte Carlo critical value from the null distribution |Z + Lap/se|.
  const int null_sims = std::max(sims, 100000);
  std::vector<double> null_abs(static_cast<std::size_t>(null_sims));
  RngStream null_stream = stream.substream(1);
  for (int i = 0; i < null_sims; ++i) {
    const double noise =
        noise_scale > 0.0 ? null_stream.laplace(0.0, noise_scale) : 0.0;
    null_abs[static_cast<std::size_t>(i)] =
        std::fabs(null_stream.normal(0.0, 1.0) + noise / se);
  }
  std::sort(null_abs.begin(), null_abs.end());
  const auto idx = static_cast<std::size_t>(
      std::min<double>(null_sims - 1.0, std::ceil((1.0 - alpha) * null_sims)));
  const double crit = null_abs[idx];

  RngStream alt_stream = stream.substream(2);
  int rejections = 0;
  for (int i = 0; i < sims; ++i) {
    const double noise =
        noise_scale > 0.0 ? alt_stream.laplace(0.0, noise_scale) : 0.0;
    const double t =
        (tau_true + alt_stream.normal(0.0, se) + noise) / se;
    if (std::fabs(t) > crit) ++rejections;
  }
  return static_cast<double>(rejections) / static_cast<double>(sims);
}

BinSeries binned_means(const Dataset& data, double c, double bin_width) {
  if (data.shape() != DatasetShape::kRdd || data.size() == 0) {
    throw std::invalid_argument("binned_means requires a nonempty RDD dataset");
  }
  if (!(bin_width > 0.0)) {
    throw std::invalid_argument("binned_means requires bin_width > 0");
  }
  const auto [lo_it, hi_it] =
      std::minmax_element(data.x().begin(), data.x().end());
  const long j_lo = static_cast<long>(std::floor((*lo_it - c) / bin_width));
  const long j_hi = static_cast<long>(std::floor((*hi_it - c) / bin_width));
  const std::size_t bins = static_cast<std::size_t>(j_hi - j_lo) + 1;

  BinSeries series;
  series.edges.resize(bins + 1);
  for (std::size_t j = 0; j <= bins; ++j) {
    const long offset = j_lo + static_cast<long>(j);
    // The cutoff is an exact edge: offset 0 gives c itself.
    series.edges[j] = offset == 0 ? c : c + static_cast<double>(offset) * bin_width;
  }
  series.midpoints.resize(bins);
  series.values.assign(bins, std::numeric_limits<double>::quiet_NaN());
  series.counts.assign(bins, 0);
  std::vector<double> sums(bins, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    long j = static_cast<long>(std::floor((data.x()[i] - c) / bin_width)) - j_lo;
    j = std::max(0L, std::min(static_cast<long>(bins) - 1, j));
    sums[static_cast<std::size_t>(j)] += data.y()[i];
    ++series.counts[static_cast<std::size_t>(j)];
  }
  for (std::size_t j = 0; j < bins; ++j) {
    series.midpoints[j] = 0.5 * (series.edges[j] + series.edges[j + 1]);
    if (series.counts[j] > 0) {
      series.values[j] = sums[j] / static_cast<double>(series.counts[j]);
    }
  }
  return series;
}

BinSeries dp_histogram(std::span<const double> xs,
                       const std::vector<double>& edges, double epsilon,
                       RngStream& stream) {
  if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end())) {
    throw std::invalid_argument("dp_histogram requires sorted edges");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("dp_histogram requires epsilon > 0");
  }
  const std::size_t bins = edges.size() - 1;
  BinSeries series;
  series.edges = edges;
  series.midpoints.resize(bins);
  series.counts.assign(bins, 0);
  series.values.assign(bins, 0.0);
  for (double x : xs) {
    if (x < edges.front() || x >= edges.back()) continue;
    const auto it = std::upper_bound(edges.begin(), edges.end(), x);
    const std::size_t j = static_cast<std::size_t>(it - edges.begin()) - 1;
    ++series.counts[j];
  }
  const double scale = 2.0 / epsilon;
  for (std::size_t j = 0; j < bins; ++j) {
    series.midpoints[j] = 0.5 * (edges[j] + edges[j + 1]);
    const double noised =
        static_cast<double>(series.counts[j]) + stream.laplace(0.0, scale);
    series.values[j] = std::max(0.0, noised);
  }
  return series;
}

}  // namespace dpident
