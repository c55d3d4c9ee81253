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
#ifndef DPIDENT_IDENTIFICATION_HPP_
#define DPIDENT_IDENTIFICATION_HPP_

#include <functional>
#include <span>
#include <vector>

#include "dpident/data_model.hpp"
#include "dpident/rng.hpp"

namespace dpident {

// Closed-interval realization of a random set inside the parameter space.
struct IntervalSet {
  double lo;
  double hi;
};

IntervalSet make_interval_set(double lo, double hi,
                              const ParamSpace& space = ParamSpace{});

// The two-realization limit set: [0, theta0] or [theta0, 1], each with
// probability 1/2.
struct ExampleRandomSet {
  double theta0;
};

ExampleRandomSet make_example_set(double theta0);

IntervalSet sample_example_set(const ExampleRandomSet& set, RngStream& stream);

// Containment functional C(K) = P(set subset of K).
double containment(const ExampleRandomSet& set, const IntervalSet& k);
double containment(std::span<const IntervalSet> realizations,
                   const IntervalSet& k);

// Argmin of a strictly convex f over the realization, by golden-section
// search; endpoints when the unconstrained minimizer falls outside.
double decision_map(const IntervalSet& realization,
                    const std::function<double(double)>& f,
                    double xtol = 1e-10);

// The curator rule that recovers theta0 for the example set: returns the
// endpoint NOT within delta of the parameter-space boundary. Ambiguous when
// both or neither endpoint is near the boundary.
double example_decision_f(const IntervalSet& realization, double delta,
                          const ParamSpace& space = ParamSpace{});

double uniform_selection(const IntervalSet& realization, RngStream& stream);

// Limit density of the uniform selection: .5/theta0 below theta0,
// .5/(1-theta0) above.
double uniform_selection_density(double theta0, double t);

// Posterior for theta given a uniform-selection output t (uninformative
// prior): C/(1-theta) below t, C/theta above, 1/C = -log(t(1-t)).
double posterior_density(double t, double theta);

struct CredibleRegion {
  double z_numeric;    // root of the posterior-mass equation (authoritative)
  double z_closed_form;  // the reference closed form 1 - (t(1-t))^alpha
  double mass_numeric;   // quadrature check of the numeric region's mass
  IntervalSet region;    // [z_numeric, 1 - z_numeric]
};

// Symmetric-form credible region [z, 1-z] with posterior mass 1 - alpha. The
// numeric root is authoritative; the closed form is cross-reported because it
// disagrees (it carries mass 1 - 2 alpha; the consistent exponent is
// alpha/2).
CredibleRegion credible_region(double t, double alpha);

struct DecisionDensityFit {
  std::vector<double> coefficients;  // shifted-Legendre basis on [0,1]
  int grid_size = 0;
  bool constrained = false;
  bool signed_flux = false;
  double residual_norm = 0.0;
  double constraint_residual = 0.0;
};

// Shifted Legendre polynomial value h_r(z) on [0,1].
double shifted_legendre(int r, double z);

// Evaluates the fitted boundary density mu_hat(z) = sum alpha_r h_r(z).
double fitted_density(const DecisionDensityFit& fit, double z);

// 1-D computational decision-mapping fit: per grid theta, one realization
// [a,b]; boundary functionals H_r = a h_r(a) + b h_r(b) and
// Q_r = h_r(a) + h_r(b) against the unsigned boundary counting measure
// (signed flux optional); least squares of theta on H with the optional
// normalization constraint (1/K) sum_k sum_r alpha_r Q_rk = 1 solved as a
// KKT system.
DecisionDensityFit fit_decision_density(
    const std::vector<double>& theta_grid,
    const std::function<IntervalSet(double)>& realization_sampler, int r_max,
    bool constraint, bool signed_flux = false);

// Minimizer of the fitted decision criterion: sum alpha_r (a h_r(a) + b h_r(b))
// projected onto the realization.
double predict_from_fit(const DecisionDensityFit& fit,
                        const IntervalSet& realization);

enum class SetSelector { kExampleDecision, kUniformSelection };

struct ConsistencyPoint {
  double n;
  double mae;
};

struct ConsistencyResult {
  std::vector<ConsistencyPoint> points;
  double final_mae = 0.0;
  int ambiguous_skips = 0;
};

// Mean absolute error of a selector applied to finite-N set realizations that
// shrink toward the example limit set at rate N^{-1/2} (a declared
// interpolation; the theory pins the limit only).
ConsistencyResult decision_consistency_experiment(
    double theta0, const std::vector<double>& n_grid, int replications,
    SetSelector selector, RngStream& stream, double delta = 0.01);

}  // namespace dpident

#endif  // DPIDENT_IDENTIFICATION_HPP_
