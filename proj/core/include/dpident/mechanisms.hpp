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
#ifndef DPIDENT_MECHANISMS_HPP_
#define DPIDENT_MECHANISMS_HPP_

#include <cstdint>
#include <functional>
#include <map>
#include <string>

#include "dpident/data_model.hpp"
#include "dpident/rng.hpp"

namespace dpident {

struct MechanismReport {
  double estimate = 0.0;
  double raw_statistic = 0.0;
  double noise_draw = 0.0;
  PrivacyParams privacy;
  std::string mechanism;
  std::map<std::string, double> scale_params;
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  // Set on the truncated weighted mean when every weight fell below the
  // threshold; the output is then pure projected noise.
  bool all_truncated = false;
};

// Laplace mechanism for the mean of x in [0,1]: x_bar + Lap(0, 1/(eps N)),
// projected on the parameter space; sharply (eps, 0)-differentially private.
MechanismReport laplace_mean_dp(const Dataset& data, double epsilon,
                                RngStream& stream,
                                const ParamSpace& space = ParamSpace{});

// Exponential-mechanism analogue: a draw from Normal(x_bar, 1/(eps^2 N^{2-2g})),
// which is (eps, Phi(-N^g + eps/2))-differentially private.
MechanismReport exponential_mean_dp(const Dataset& data, double epsilon,
                                    double gamma, RngStream& stream,
                                    const ParamSpace& space = ParamSpace{});

enum class TruncatedKind { kLaplace, kExponential };

// Truncated weighted mean of x/w over records with w >= delta_trunc,
// normalized by the effective sample size N * pi_hat, with pi_hat the
// empirical surviving fraction; Laplace scale 1/(eps N pi_hat delta_trunc) or
// the matching exponential-mechanism normal noise.
MechanismReport truncated_weighted_mean_dp(const Dataset& data, double epsilon,
                                           double delta_trunc,
                                           TruncatedKind kind, double gamma,
                                           RngStream& stream);

// Bernoulli subsampling (keep each record with probability pi) followed by
// Laplace noise: project((1/(N pi)) sum d_i x_i + Lap(0, lambda), Theta).
MechanismReport bernoulli_laplace_mean(const Dataset& data, double pi,
                                       double lambda, RngStream& stream,
                                       const ParamSpace& space = ParamSpace{});

// Tight epsilon for the Bernoulli-Laplace mechanism,
// log(1 - pi + pi exp(1/(N lambda pi))); +inf on exponent overflow.
double bernoulli_laplace_epsilon(double n, double pi, double lambda);

// Whether a candidate epsilon satisfies the simpler sufficient condition
// eps >= pi exp(1/(N lambda pi)).
bool bernoulli_laplace_sufficient(double n, double pi, double lambda,
                                  double candidate_epsilon);

struct NoiseFamily {
  enum class Kind { kLaplace, kGaussian } kind;
  double scale;  // Laplace scale or Gaussian sd
};

// sup over z in [a,b] of |log f(z) - log f(z + delta_shift)| for the noise
// family's density f; the quantity whose divergence as the variance shrinks
// forces inconsistency when the sensitivity stays bounded away from zero.
double discrepancy(const NoiseFamily& family, double delta_shift, double a,
                   double b);

// Probability that the log-likelihood ratio of the untruncated weighted-mean
// mechanisms exceeds epsilon, in closed form.
double no_truncation_violation(TruncatedKind kind, double c_scale, double delta,
                               double epsilon, double n, double gamma);

using MechanismFn = std::function<double(const Dataset&, RngStream&)>;

struct AuditResult {
  double epsilon_hat = 0.0;
  double half_width = 0.0;
  // Complete separation observed (a zero-noise mechanism): epsilon_hat is
  // +inf and the flag is set.
  bool disjoint_support = false;
  double binding_threshold = 0.0;
  int trials = 0;
};

// Empirical differential-privacy audit over half-line events {output <= t} on
// a regular threshold grid: epsilon_hat = max over events and both orderings
// of log((p_hat - delta) / q_hat) with add-one smoothing, plus a Monte Carlo
// half-width that accounts for the maximum over the event family.
AuditResult audit_dp(const MechanismFn& mechanism, const Dataset& d,
                     const Dataset& d_prime, int trials, double delta,
                     RngStream& stream, int grid_points = 101);

}  // namespace dpident

#endif  // DPIDENT_MECHANISMS_HPP_
