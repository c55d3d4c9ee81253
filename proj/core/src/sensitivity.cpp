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
#include "dpident/sensitivity.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "dpident/errors.hpp"
#include "dpident/parallel.hpp"

namespace dpident {

std::string sensitivity_kind_name(SensitivityKind kind) {
  switch (kind) {
    case SensitivityKind::kFinite: return "Finite";
    case SensitivityKind::kDecayingRate: return "DecayingRate";
    case SensitivityKind::kBoundedBelow: return "BoundedBelow";
    case SensitivityKind::kInfinite: return "Infinite";
  }
  return "unknown";
}

namespace {

double weighted_mean_bound(int t, double c1, double c2, double d1, double d2) {
  if (t < 1) throw std::invalid_argument("weighted mean bound requires T >= 1");
  if (!(c2 > 0.0) || c1 < 0.0 || c1 > c2) {
    throw std::invalid_argument("weight range requires 0 <= c1 <= c2, c2 > 0");
  }
  if (d1 > d2) throw std::invalid_argument("value range requires d1 <= d2");
  if (d1 == d2) return 0.0;
  if (std::isinf(d1) || std::isinf(d2)) return kInf;
  if (c1 == 0.0) return d2 - d1;
  return c2 * (d2 - d1) / (t * c1 + c2);
}

}  // namespace

double weighted_mean_sensitivity_replace(int t, double c1, double c2, double d1,
                                         double d2) {
  return weighted_mean_bound(t, c1, c2, d1, d2);
}

double weighted_mean_sensitivity_drop(int t, double c1, double c2, double d1,
                                      double d2) {
  return weighted_mean_bound(t, c1, c2, d1, d2);
}

SensitivityReport nr_boundary_sensitivity(const KernelSpec& kernel,
                                          const Interval& y_left_range,
                                          const Interval& y_right_range,
                                          int m_l, int m_r, int n) {
  if (m_l < 1 || m_r < 1 || m_l + m_r > n) {
    throw std::invalid_argument(
        "nr_boundary_sensitivity requires m_l, m_r >= 1 and m_l + m_r <= N");
  }
  if (!y_left_range.bounded() || !y_right_range.bounded()) {
    return {SensitivityKind::kInfinite, kInf, {},
            "unbounded outcome range on one side; a single Y replacement is "
            "unbounded"};
  }
  const double range_l = y_left_range.width();
  const double range_r = y_right_range.width();
  const double kb = kernel.k_bar;
  const double ku = kernel.bounded_support() ? kernel.k_under : 0.0;

  if (ku == 0.0) {
    // Continuous bounded-support or unbounded-support kernel: one weight can
    // carry the whole side, so each side attains its full outcome range.
    return {SensitivityKind::kFinite, range_l + range_r, {},
            "continuous-kernel case: sum of one-sided outcome ranges"};
  }

  // Kernel with k_under > 0: the exact maximum over the eight single-record
  // move cases; switch cases keep both the pre- and post-move dataset at or
  // above the per-side minimum counts.
  auto drop_change = [&](double range, int count_before) {
    // count_before terms reduce to count_before - 1
    return kb * range / ((count_before - 1) * ku + kb);
  };
  auto gain_change = [&](double range, int count_before) {
    return kb * range / (count_before * ku + kb);
  };
  struct Case {
    const char* name;
    double value;
  };
  std::vector<Case> cases;
  cases.push_back({"G_L0", gain_change(range_l, m_l)});
  cases.push_back({"G_R0", gain_change(range_r, m_r)});
  cases.push_back({"G_0L", gain_change(range_l, m_l)});
  cases.push_back({"G_0R", gain_change(range_r, m_r)});
  cases.push_back({"G_LL", drop_change(range_l, m_l) /* == replace bound */});
  cases.push_back({"G_RR", drop_change(range_r, m_r)});
  if (m_l + m_r + 1 <= n) {
    // Left-to-right switch with pre-move counts (l, n-l): the convex-in-l sum
    // of a drop and a gain change peaks at the admissible endpoints
    // l = m_l + 1 and l = n - m_r.
    const double lr_at_low = drop_change(range_l, m_l + 1) +
                             gain_change(range_r, n - m_l - 1);
    const double lr_at_high = drop_change(range_l, n - m_r) +
                              gain_change(range_r, m_r);
    cases.push_back({"G_LR", std::max(lr_at_low, lr_at_high)});
    const double rl_at_low = drop_change(range_r, m_r + 1) +
                             gain_change(range_l, n - m_r - 1);
    const double rl_at_high = drop_change(range_r, n - m_l) +
                              gain_change(range_l, m_l);
    cases.push_back({"G_RL", std::max(rl_at_low, rl_at_high)});
  }
  const Case* best = &cases[0];
  for (const Case& c : cases) {
    if (c.value > best->value) best = &c;
  }
  return {SensitivityKind::kFinite, best->value, {},
          std::string("k_under > 0 case: binding case ") + best->name};
}

SensitivityReport local_linear_sensitivity(const KernelSpec& kernel,
                                           const Interval& y_left_range,
                                           const Interval& y_right_range,
                                           std::optional<double> eigenvalue_floor,
                                           int m_l, int m_r) {
  if (!y_left_range.bounded() || !y_right_range.bounded()) {
    return {SensitivityKind::kInfinite, kInf, {},
            "unbounded outcome range; changing one Y value is unbounded"};
  }
  const bool uniform_like = kernel.bounded_support() && kernel.k_under > 0.0;
  if (!eigenvalue_floor || !(*eigenvalue_floor > 0.0) || !uniform_like) {
    return {SensitivityKind::kInfinite, kInf, {},
            "a running-variable configuration with vanishing minimum design "
            "eigenvalue drives the intercept change unboundedly"};
  }
  SequenceSpec rate{1.0 / static_cast<double>(std::min(m_l, m_r)), -1.0, 0.0};
  return {SensitivityKind::kDecayingRate, 0.0, rate,
          "eigenvalue floor active: rate 1/min{m_l, m_r}; the unconditional "
          "sensitivity stays bounded below because empty neighborhoods retain "
          "positive probability"};
}

namespace {

// Concrete adjacent dataset pair in the restricted fuzzy design: both sides
// have treatment variation and only one running-variable value moves. The
// estimator change on this pair is a valid lower bound on the global
// sensitivity.
double fuzzy_witness_change(const KernelSpec& kernel,
                            const Interval& y_left_range,
                            const Interval& y_right_range, int m_l, int m_r) {
  const double h = 1.0;
  const double c = 0.0;
  const int nl = std::max(m_l, 4);
  const int nr = std::max(m_r, 4);
  std::vector<double> y, x, w;
  for (int i = 0; i < nl; ++i) {
    x.push_back(-0.8 + 0.6 * static_cast<double>(i) / nl);
    y.push_back(i % 2 == 0 ? y_left_range.lo : y_left_range.hi);
    w.push_back(i % 4 == 0 ? 1.0 : 0.0);
  }
  const double delta = 0.02;
  for (int i = 0; i < nr - 1; ++i) {
    x.push_back(delta + 1e-4 * i);
    y.push_back(y_right_range.hi);
    w.push_back(i % 4 == 3 ? 0.0 : 1.0);
  }
  const double moved_from = 1.0 - delta;
  const double moved_to = delta * 0.5;
  x.push_back(moved_from);
  y.push_back(y_right_range.lo);
  w.push_back(1.0);

  Dataset d1 = Dataset::rdd(y, x, w);
  x.back() = moved_to;
  Dataset d2 = Dataset::rdd(y, x, w);
  const double t1 = local_linear_fuzzy(d1, c, kernel, h).tau_hat;
  const double t2 = local_linear_fuzzy(d2, c, kernel, h).tau_hat;
  return std::fabs(t1 - t2);
}

}  // namespace

SensitivityReport fuzzy_ll_sensitivity(const KernelSpec& kernel,
                                       const Interval& y_left_range,
                                       const Interval& y_right_range,
                                       bool treatment_variation_restriction,
                                       int m_l, int m_r) {
  if (!y_left_range.bounded() || !y_right_range.bounded()) {
    return {SensitivityKind::kInfinite, kInf, {},
            "unbounded outcome range; changing one Y value is unbounded"};
  }
  if (!treatment_variation_restriction) {
    return {SensitivityKind::kInfinite, kInf, {},
            "all realizations admissible: a perfect-fit treatment "
            "configuration makes the intercept-ratio change unbounded"};
  }
  const double witness =
      fuzzy_witness_change(kernel, y_left_range, y_right_range, m_l, m_r);
  return {SensitivityKind::kBoundedBelow, witness, {},
          "treatment-variation restriction: witness pair change, a lower "
          "bound that does not shrink with N"};
}

SensitivityReport ate_propensity_sensitivity(const KernelSpec& kernel,
                                             const Interval& x_support,
                                             const SequenceSpec& h_seq,
                                             int reference_n) {
  if (!x_support.bounded()) {
    return {SensitivityKind::kInfinite, kInf, {},
            "unbounded X support: inverse propensity weights are unbounded"};
  }
  const double n = static_cast<double>(reference_n);
  const double h = seq_value(h_seq, n);
  const double k_tail = eval_kernel(kernel, x_support.width() / h);
  if (!(k_tail > 0.0)) {
    return {SensitivityKind::kInfinite, kInf, {},
            "kernel weight vanishes across the support diameter: a fitted "
            "propensity of zero is attainable"};
  }
  const double bound = kernel.k_bar / (n * h * k_tail);
  const bool rate_ok = h_seq.n_power < -0.25;
  return {SensitivityKind::kBoundedBelow, bound, {},
          rate_ok ? "bounded X with h_N = o(N^{-1/4}): lower bound "
                    "k_bar/(N h K(diam/h)) does not decrease with N"
                  : "bounded X: lower bound k_bar/(N h K(diam/h)) at the "
                    "reference N (bandwidth decays too slowly for the "
                    "non-shrinking guarantee)"};
}

CalibratedNoise calibrated_noise_from_report(double epsilon,
                                             const SensitivityReport& report) {
  if (report.kind != SensitivityKind::kFinite) {
    throw InfiniteSensitivityError(
        "calibrated noise needs a Finite sensitivity, got " +
        sensitivity_kind_name(report.kind) + " (" + report.detail + ")");
  }
  return CalibratedNoise{epsilon, report.value};
}

namespace {

struct RecordDomain {
  std::vector<double> x, y, w, d;
};

Dataset make_dataset(DatasetShape shape, const std::vector<double>& x,
                     const std::vector<double>& y, const std::vector<double>& w,
                     const std::vector<double>& d) {
  switch (shape) {
    case DatasetShape::kUnivariate:
      return Dataset::univariate(x);
    case DatasetShape::kWeighted:
      return Dataset::weighted(x, w);
    case DatasetShape::kRdd:
      return Dataset::rdd(y, x, w, d);
  }
  throw std::invalid_argument("unknown dataset shape");
}

}  // namespace

double brute_force_sensitivity(const GridEstimator& estimator,
                               DatasetShape shape, const SensitivityGrid& grid,
                               int n) {
  if (n < 1 || n > 8) {
    throw std::invalid_argument("brute_force_sensitivity requires 1 <= n <= 8");
  }
  const bool use_y = shape == DatasetShape::kRdd;
  const bool use_w = shape != DatasetShape::kUnivariate;
  const bool use_d = shape == DatasetShape::kRdd && grid.d.size() > 1;

  // Record domain: cartesian product of the per-field grids in play.
  std::vector<std::array<double, 4>> domain;  // (x, y, w, d)
  for (double x : grid.x) {
    for (double y : use_y ? grid.y : std::vector<double>{0.0}) {
      for (double w : use_w ? grid.w : std::vector<double>{0.0}) {
        for (double d : use_d ? grid.d : std::vector<double>{0.0}) {
          domain.push_back({x, y, w, d});
        }
      }
    }
  }
  if (domain.empty()) {
    throw std::invalid_argument("brute_force_sensitivity: empty grid");
  }
  const double m = static_cast<double>(domain.size());
  const double evals = std::pow(m, n) * (1.0 + n * m);
  if (evals > 1e7) {
    throw BudgetExceededError("enumeration would need " +
                              std::to_string(evals) + " evaluations (cap 1e7)");
  }

  // Enumeration parallelized over the first record's value; the max
  // reduction is order-independent, so the result does not depend on the
  // worker count. The estimator callable must be pure.
  std::vector<double> best_per_chunk(domain.size(), 0.0);
  parallel_for(static_cast<int>(domain.size()), 0, [&](int first) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(n), 0);
    idx[0] = static_cast<std::size_t>(first);
    std::vector<double> x(n), y(n), w(n), d(n);
    double best = 0.0;
    for (;;) {
      for (int i = 0; i < n; ++i) {
        const auto& rec = domain[idx[static_cast<std::size_t>(i)]];
        x[static_cast<std::size_t>(i)] = rec[0];
        y[static_cast<std::size_t>(i)] = rec[1];
        w[static_cast<std::size_t>(i)] = rec[2];
        d[static_cast<std::size_t>(i)] = rec[3];
      }
      Dataset base = make_dataset(shape, x, y, w, d);
      const std::optional<double> f0 = estimator(base);
      if (f0) {
        for (int pos = 0; pos < n; ++pos) {
          const auto saved = domain[idx[static_cast<std::size_t>(pos)]];
          for (const auto& rec : domain) {
            base.set_record(static_cast<std::size_t>(pos), rec[0], rec[1],
                            rec[2], rec[3]);
            const std::optional<double> f1 = estimator(base);
            if (f1) best = std::max(best, std::fabs(*f1 - *f0));
          }
          base.set_record(static_cast<std::size_t>(pos), saved[0], saved[1],
                          saved[2], saved[3]);
        }
      }
      int carry = n - 1;
      while (carry >= 1) {
        if (++idx[static_cast<std::size_t>(carry)] < domain.size()) break;
        idx[static_cast<std::size_t>(carry)] = 0;
        --carry;
      }
      if (carry < 1) break;
    }
    best_per_chunk[static_cast<std::size_t>(first)] = best;
  });
  double best = 0.0;
  for (double b : best_per_chunk) best = std::max(best, b);
  return best;
}

}  // namespace dpident
