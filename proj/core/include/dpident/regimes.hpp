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
#ifndef DPIDENT_REGIMES_HPP_
#define DPIDENT_REGIMES_HPP_

#include <functional>
#include <string>
#include <vector>

#include "dpident/data_model.hpp"
#include "dpident/rng.hpp"
#include "dpident/stats.hpp"

namespace dpident {

enum class MechanismFamily { kTruncatedWeightedMean, kBernoulliLaplace };

// Regime labels across both sequence-indexed mechanism families. Truncated
// weighted mean uses R1/R2/R3; the Bernoulli-Laplace mechanism refines by the
// limit of N pi_N into A (infinite), B (finite positive c) and C (zero).
enum class Regime {
  kTwmR1,
  kTwmR2,
  kTwmR3,
  kBlR1A,
  kBlR1B,
  kBlR1C,
  kBlR2A,
  kBlR2B,
  kBlR2C,
  kBlR3,
};

std::string regime_name(Regime regime);

struct RegimeLabel {
  MechanismFamily family;
  Regime regime;
  // lim N pi_N for the B sub-cases; lim lambda_N for the Bernoulli-Laplace
  // regime 2; lim delta_N for the truncation regime 2.
  double c = 0.0;
  double lambda_bar = 0.0;
  double delta_bar = 0.0;
};

// Three-way split on N pi_N delta_N and the truncation threshold limit. A
// finite nonzero limit of the product is not covered and raises Unclassified.
RegimeLabel classify_truncation_regime(const SequenceSpec& pi,
                                       const SequenceSpec& delta_trunc);

RegimeLabel classify_bernoulli_regime(const SequenceSpec& lambda,
                                      const SequenceSpec& pi);

struct LimitDescriptor {
  enum class Kind {
    kPointMass,
    kBernoulliHalf,
    kProjectedLaplace,
    kPoissonMean,
    kPoissonMeanPlusLaplace,
  };
  Kind kind;
  ParamSpace space;
  double point = 0.0;   // point-mass location / Laplace center
  double scale = 0.0;   // Laplace scale
  double c = 0.0;       // Poisson parameter
  std::function<double(RngStream&)> base;  // base draw for Poisson-mean kinds

  double sample(RngStream& stream) const;
  // Closed-form CDF for the point-mass / Bernoulli / projected-Laplace kinds;
  // Poisson-mean kinds are compared by sampling instead.
  bool has_closed_cdf() const;
  ReferenceCdf reference_cdf() const;
};

struct LimitParams {
  double theta0 = 0.5;
  double c = 0.0;
  double lambda_bar = 0.0;
  ParamSpace space{};
  std::function<double(RngStream&)> base;
};

LimitDescriptor limit_of(const RegimeLabel& regime, const LimitParams& params);

// Lambda(c): the mean of k i.i.d. base draws with k ~ Poisson(c), defined as
// 0 when k = 0.
double sample_poisson_mean(double c, const std::function<double(RngStream&)>& base,
                           RngStream& stream);

// Simulation populations for the convergence study.
struct BernoulliLaplacePopulation {
  // i.i.d. X draws supported on the parameter space.
  std::function<double(RngStream&)> x;
  double mean_x = 0.5;
};

struct TruncatedPopulation {
  std::function<double(RngStream&)> x;  // numerator, in [0,1]
  std::function<double(RngStream&)> w;  // weight, in [0,1]
  double theta0 = 0.0;                  // E[X/W]
};

struct ConvergencePoint {
  double n;
  double distance;
};

struct ConvergenceResult {
  RegimeLabel regime;
  LimitDescriptor limit;
  std::vector<ConvergencePoint> points;
  double final_distance = 0.0;
  std::vector<double> final_sample;
};

// Simulates the mechanism along the N grid and reports the Levy distance
// between the replication CDF and the regime's weak limit per N. The Levy
// metric (rather than the raw sup distance) is used because several limits
// are point masses, which a continuous finite-N law approaches weakly but
// never in sup norm.
ConvergenceResult simulate_bernoulli_laplace_convergence(
    const SequenceSpec& lambda, const SequenceSpec& pi,
    const BernoulliLaplacePopulation& population,
    const std::vector<double>& n_grid, int replications, RngStream& stream,
    int threads = 0);

ConvergenceResult simulate_truncated_convergence(
    const SequenceSpec& pi, const SequenceSpec& delta_trunc, double epsilon,
    const TruncatedPopulation& population, const std::vector<double>& n_grid,
    int replications, RngStream& stream, int threads = 0);

}  // namespace dpident

#endif  // DPIDENT_REGIMES_HPP_
