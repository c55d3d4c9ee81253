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
#ifndef DPIDENT_SENSITIVITY_HPP_
#define DPIDENT_SENSITIVITY_HPP_

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpident/data_model.hpp"
#include "dpident/kernels.hpp"
#include "dpident/rdd.hpp"

namespace dpident {

enum class SensitivityKind { kFinite, kDecayingRate, kBoundedBelow, kInfinite };

// Tagged magnitude of a global sensitivity, under the replace-one-record
// adjacency. `detail` names the case that produced the classification.
struct SensitivityReport {
  SensitivityKind kind;
  double value = 0.0;      // Finite magnitude or BoundedBelow lower bound
  SequenceSpec rate{};     // populated for kDecayingRate
  std::string detail;
};

std::string sensitivity_kind_name(SensitivityKind kind);

// Maximum absolute change of a (T+1)-term weighted average when one
// (value, weight) pair is replaced, with weights in [c1, c2] and values in
// [d1, d2] (d's may be -inf/+inf). Three cases:
//   c1 == 0            -> d2 - d1
//   c1 > 0             -> c2 (d2 - d1) / (T c1 + c2)
//   unbounded d range  -> +inf
double weighted_mean_sensitivity_replace(int t, double c1, double c2, double d1,
                                         double d2);

// Same bound when the (T+1)-th pair is dropped instead of replaced; the case
// structure and magnitudes coincide with the replace variant.
double weighted_mean_sensitivity_drop(int t, double c1, double c2, double d1,
                                      double d2);

// Global sensitivity of the boundary-regression estimator (difference of
// kernel-weighted outcome means) with at least m_l / m_r observations inside
// the left / right K-h-neighborhood of the cutoff and N observations total.
SensitivityReport nr_boundary_sensitivity(const KernelSpec& kernel,
                                          const Interval& y_left_range,
                                          const Interval& y_right_range,
                                          int m_l, int m_r, int n);

// Local linear estimator: infinite without an eigenvalue floor on the
// weighted design (a near-collinear running-variable configuration drives the
// intercept change unboundedly); decays like 1/min{m_l, m_r} only for
// bounded-support kernels with k_under > 0 once a floor is imposed.
SensitivityReport local_linear_sensitivity(const KernelSpec& kernel,
                                           const Interval& y_left_range,
                                           const Interval& y_right_range,
                                           std::optional<double> eigenvalue_floor,
                                           int m_l, int m_r);

// Fuzzy local linear estimator. Under the unrestricted adjacency a perfect-fit
// treatment configuration makes the sensitivity infinite; restricting the
// admissible datasets to have treatment variation in each neighborhood leaves
// it bounded away from zero (the reported value is an explicit witness pair's
// estimator change, hence a valid lower bound).
SensitivityReport fuzzy_ll_sensitivity(const KernelSpec& kernel,
                                       const Interval& y_left_range,
                                       const Interval& y_right_range,
                                       bool treatment_variation_restriction,
                                       int m_l, int m_r);

// Propensity-weighted ATE estimator: infinite for unbounded X support;
// otherwise bounded below by k_bar / (N h_N K(diam(X)/h_N)) evaluated at the
// reference sample size.
SensitivityReport ate_propensity_sensitivity(const KernelSpec& kernel,
                                             const Interval& x_support,
                                             const SequenceSpec& h_seq,
                                             int reference_n = 100);

// Converts a finite sensitivity report into calibrated Laplace noise for
// dp_rdd_estimate; anything but a Finite report is an error, mirroring the
// designs whose sensitivity never reaches zero.
CalibratedNoise calibrated_noise_from_report(double epsilon,
                                             const SensitivityReport& report);

// Admissible values per record field for the brute-force oracle. Fields not
// used by the dataset shape are ignored.
struct SensitivityGrid {
  std::vector<double> x;
  std::vector<double> y{0.0};
  std::vector<double> w{0.0};
  std::vector<double> d{0.0};
};

// Returns nullopt when the dataset is outside the estimator's admissible
// domain; pairs with an inadmissible side are skipped by the oracle.
using GridEstimator = std::function<std::optional<double>(const Dataset&)>;

// Exhaustive maximum of |f(D) - f(D')| over all grid datasets of size n and
// all single-record replacements. Throws BudgetExceeded when the enumeration
// would pass 1e7 estimator evaluations.
double brute_force_sensitivity(const GridEstimator& estimator,
                               DatasetShape shape, const SensitivityGrid& grid,
                               int n);

}  // namespace dpident

#endif  // DPIDENT_SENSITIVITY_HPP_
