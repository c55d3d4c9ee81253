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
#ifndef DPIDENT_RDD_HPP_
#define DPIDENT_RDD_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <variant>

#include "dpident/data_model.hpp"
#include "dpident/kernels.hpp"
#include "dpident/rng.hpp"

namespace dpident {

// One side of a local linear fit: intercept/slope at the cutoff plus a
// heteroskedasticity-robust standard error for the intercept.
struct SideFit {
  double intercept = 0.0;
  double slope = 0.0;
  double se_intercept = 0.0;
  int n = 0;
};

struct RddFit {
  double tau_hat = 0.0;
  // Robust SE of the intercept difference (left/right fits independent).
  double se_tau = 0.0;
  SideFit left;
  SideFit right;
  double h = 0.0;
  KernelSpec kernel{KernelId::kTriangular, 1.0, 1.0, 0.0, true};
  int n_left = 0;
  int n_right = 0;
};

// Difference of kernel-weighted outcome means across the cutoff.
RddFit nr_boundary_estimate(const Dataset& data, double c,
                            const KernelSpec& kernel, double h);

// Per-side weighted least squares of y on (1, x - c); tau is the intercept
// difference. Throws SingularDesign when a side's weighted normal matrix has
// condition number beyond 1e12.
RddFit local_linear_sharp(const Dataset& data, double c,
                          const KernelSpec& kernel, double h);

// Ratio of intercept differences for outcome and treatment regressions.
// The uniform kernel is the conventional choice here; others are allowed.
RddFit local_linear_fuzzy(const Dataset& data, double c,
                          const KernelSpec& kernel, double h);

// Propensity-weighted ATE with leave-in kernel regression propensity scores.
// By default a fitted score of exactly 0 or 1 is a hard error; clipping into
// [1e-6, 1-1e-6] is opt-in.
double ate_propensity(const Dataset& data, const KernelSpec& kernel, double h,
                      bool clip_scores = false);

struct FixedBandwidth {
  double h;
};
struct RuleOfThumbBandwidth {
  double c_h = 1.0;
};
struct IkBandwidth {};

using BandwidthStrategy =
    std::variant<FixedBandwidth, RuleOfThumbBandwidth, IkBandwidth>;

double select_bandwidth(const Dataset& data, double c,
                        const BandwidthStrategy& strategy,
                        const KernelSpec& kernel);

// Regularized Imbens-Kalyanaraman plug-in bandwidth for the sharp design.
double ik_bandwidth(const Dataset& data, double c, const KernelSpec& kernel);

enum class RddDesign { kSharpNr, kSharpLocLin, kFuzzyLocLin };

struct CalibratedNoise {
  double epsilon;
  // Finite global sensitivity the Laplace scale is calibrated from.
  double sensitivity;
};
struct FixedVarianceNoise {
  double variance;
  // Optional sensitivity used only to annotate the implied epsilon.
  std::optional<double> sensitivity;
};

using RddNoise = std::variant<CalibratedNoise, FixedVarianceNoise>;

struct DpRddResult {
  double estimate = 0.0;
  double raw_tau = 0.0;
  double noise_draw = 0.0;
  double epsilon = 0.0;  // analytic for Calibrated, implied annotation else
  double delta = 0.0;
  bool epsilon_is_annotation = false;
  double laplace_scale = 0.0;
  RddFit fit;
};

// Adds Laplace mechanism noise to the chosen fit. Calibrated mode scales the
// noise as sensitivity/epsilon; FixedVariance fixes Var(noise) = v and only
// annotates the implied epsilon = sensitivity * sqrt(2/v).
DpRddResult dp_rdd_estimate(RddDesign design, const Dataset& data, double c,
                            const KernelSpec& kernel, double h,
                            const RddNoise& noise, RngStream& stream);

}  // namespace dpident

#endif  // DPIDENT_RDD_HPP_
