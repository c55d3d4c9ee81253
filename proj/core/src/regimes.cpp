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
#include "dpident/regimes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpident/errors.hpp"
#include "dpident/parallel.hpp"

namespace dpident {

std::string regime_name(Regime regime) {
  switch (regime) {
    case Regime::kTwmR1: return "R1";
    case Regime::kTwmR2: return "R2";
    case Regime::kTwmR3: return "R3";
    case Regime::kBlR1A: return "R1A";
    case Regime::kBlR1B: return "R1B";
    case Regime::kBlR1C: return "R1C";
    case Regime::kBlR2A: return "R2A";
    case Regime::kBlR2B: return "R2B";
    case Regime::kBlR2C: return "R2C";
    case Regime::kBlR3: return "R3";
  }
  return "unknown";
}

RegimeLabel classify_truncation_regime(const SequenceSpec& pi,
                                       const SequenceSpec& delta_trunc) {
  const SeqLimit prod = seq_limit(seq_scale_by_n(seq_multiply(pi, delta_trunc)));
  const SeqLimit dlim = seq_limit(delta_trunc);
  RegimeLabel label;
  label.family = MechanismFamily::kTruncatedWeightedMean;
  switch (prod.cls) {
    case LimitClass::kZero:
      label.regime = Regime::kTwmR1;
      return label;
    case LimitClass::kFinite:
      throw UnclassifiedError(
          "N pi_N delta_N has a finite nonzero limit, a case outside the "
          "three-regime split");
    case LimitClass::kInfinite:
      break;
  }
  if (dlim.cls == LimitClass::kZero) {
    label.regime = Regime::kTwmR3;
  } else {
    label.regime = Regime::kTwmR2;
    label.delta_bar = dlim.cls == LimitClass::kFinite ? dlim.value : kInf;
  }
  return label;
}

RegimeLabel classify_bernoulli_regime(const SequenceSpec& lambda,
                                      const SequenceSpec& pi) {
  const SeqLimit llim = seq_limit(lambda);
  const SeqLimit npi = seq_limit(seq_scale_by_n(pi));
  RegimeLabel label;
  label.family = MechanismFamily::kBernoulliLaplace;
  if (llim.cls == LimitClass::kInfinite) {
    label.regime = Regime::kBlR3;
    return label;
  }
  const bool lambda_zero = llim.cls == LimitClass::kZero;
  if (!lambda_zero) label.lambda_bar = llim.value;
  switch (npi.cls) {
    case LimitClass::kInfinite:
      label.regime = lambda_zero ? Regime::kBlR1A : Regime::kBlR2A;
      break;
    case LimitClass::kFinite:
      label.regime = lambda_zero ? Regime::kBlR1B : Regime::kBlR2B;
      label.c = npi.value;
      break;
    case LimitClass::kZero:
      label.regime = lambda_zero ? Regime::kBlR1C : Regime::kBlR2C;
      break;
  }
  return label;
}

double LimitDescriptor::sample(RngStream& stream) const {
  switch (kind) {
    case Kind::kPointMass:
      return point;
    case Kind::kBernoulliHalf:
      return stream.uniform01() < 0.5 ? space.lo : space.hi;
    case Kind::kProjectedLaplace:
      return project(stream.laplace(point, scale), space);
    case Kind::kPoissonMean:
      return project(sample_poisson_mean(c, base, stream), space);
    case Kind::kPoissonMeanPlusLaplace:
      return project(sample_poisson_mean(c, base, stream) +
                         stream.laplace(0.0, scale),
                     space);
  }
  throw std::logic_error("unknown limit kind");
}

bool LimitDescriptor::has_closed_cdf() const {
  return kind == Kind::kPointMass || kind == Kind::kBernoulliHalf ||
         kind == Kind::kProjectedLaplace;
}

ReferenceCdf LimitDescriptor::reference_cdf() const {
  ReferenceCdf ref;
  const double lo = space.lo;
  const double hi = space.hi;
  switch (kind) {
    case Kind::kPointMass: {
      const double p = point;
      ref.cdf = [p](double t) { return t >= p ? 1.0 : 0.0; };
      ref.atoms = {p};
      return ref;
    }
    case Kind::kBernoulliHalf: {
      ref.cdf = [lo, hi](double t) {
        if (t < lo) return 0.0;
        if (t < hi) return 0.5;
        return 1.0;
      };
      ref.atoms = {lo, hi};
      return ref;
    }
    case Kind::kProjectedLaplace: {
      const double center = point;
      const double s = scale;
      ref.cdf = [lo, hi, center, s](double t) {
        if (t < lo) return 0.0;
        if (t >= hi) return 1.0;
        return laplace_cdf(t, center, s);
      };
      ref.atoms = {lo, hi};
      return ref;
    }
    default:
      throw std::logic_error("no closed-form CDF for Poisson-mean limits");
  }
}

LimitDescriptor limit_of(const RegimeLabel& regime, const LimitParams& params) {
  LimitDescriptor d;
  d.space = params.space;
  d.base = params.base;
  switch (regime.regime) {
    case Regime::kTwmR1:
      d.kind = LimitDescriptor::Kind::kBernoulliHalf;
      return d;
    case Regime::kTwmR2:
      // theta0 carries the truncated limit point min{1, max{0, b_bar}}.
      d.kind = LimitDescriptor::Kind::kPointMass;
      d.point = project(params.theta0, params.space);
      return d;
    case Regime::kTwmR3:
      d.kind = LimitDescriptor::Kind::kPointMass;
      d.point = project(params.theta0, params.space);
      return d;
    case Regime::kBlR1A:
      d.kind = LimitDescriptor::Kind::kPointMass;
      d.point = project(params.theta0, params.space);
      return d;
    case Regime::kBlR1B:
      d.kind = LimitDescriptor::Kind::kPoissonMean;
      d.c = params.c;
      return d;
    case Regime::kBlR1C:
      d.kind = LimitDescriptor::Kind::kPointMass;
      d.point = project(0.0, params.space);
      return d;
    case Regime::kBlR2A:
      d.kind = LimitDescriptor::Kind::kProjectedLaplace;
      d.point = params.theta0;
      d.scale = params.lambda_bar;
      return d;
    case Regime::kBlR2B:
      d.kind = LimitDescriptor::Kind::kPoissonMeanPlusLaplace;
      d.c = params.c;
      d.scale = params.lambda_bar;
      return d;
    case Regime::kBlR2C:
      d.kind = LimitDescriptor::Kind::kProjectedLaplace;
      d.point = 0.0;
      d.scale = params.lambda_bar;
      return d;
    case Regime::kBlR3:
      d.kind = LimitDescriptor::Kind::kBernoulliHalf;
      return d;
  }
  throw std::logic_error("unknown regime");
}

double sample_poisson_mean(double c, const std::function<double(RngStream&)>& base,
                           RngStream& stream) {
  if (!(c >= 0.0)) {
    throw std::invalid_argument("sample_poisson_mean requires c >= 0");
  }
  const std::uint64_t k = stream.poisson(c);
  if (k == 0) return 0.0;
  double sum = 0.0;
  for (std::uint64_t j = 0; j < k; ++j) sum += base(stream);
  return sum / static_cast<double>(k);
}

namespace {

double distance_to_limit(std::vector<double> sample, const LimitDescriptor& lim,
                         RngStream& ref_stream) {
  if (lim.has_closed_cdf()) {
    return levy_distance(std::move(sample), lim.reference_cdf());
  }
  const int ref_draws = 50000;
  std::vector<double> ref(ref_draws);
  for (int i = 0; i < ref_draws; ++i) ref[static_cast<std::size_t>(i)] = lim.sample(ref_stream);
  return levy_distance_two_sample(std::move(sample), std::move(ref));
}

}  // namespace

ConvergenceResult simulate_bernoulli_laplace_convergence(
    const SequenceSpec& lambda, const SequenceSpec& pi,
    const BernoulliLaplacePopulation& population,
    const std::vector<double>& n_grid, int replications, RngStream& stream,
    int threads) {
  if (n_grid.empty() || replications < 1) {
    throw std::invalid_argument("convergence simulation needs a grid and reps");
  }
  ConvergenceResult result;
  result.regime = classify_bernoulli_regime(lambda, pi);
  LimitParams params;
  params.theta0 = population.mean_x;
  params.c = result.regime.c;
  params.lambda_bar = result.regime.lambda_bar;
  params.space = ParamSpace{0.0, 1.0};
  params.base = population.x;
  result.limit = limit_of(result.regime, params);

  const ParamSpace space = params.space;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const double n = n_grid[gi];
    const double pi_n = std::min(1.0, seq_value(pi, n));
    const double lambda_n = seq_value(lambda, n);
    const auto count = static_cast<std::uint64_t>(n);
    std::vector<double> estimates(static_cast<std::size_t>(replications));
    RngStream grid_stream = stream.substream(1000 + gi);
    parallel_for(replications, threads, [&](int r) {
      RngStream rs = grid_stream.substream(static_cast<std::uint64_t>(r));
      // Downsampled mean normalized by the realized kept count (0 when the
      // subsample is empty), the normalization under which the per-regime
      // weak limits hold.
      double sum = 0.0;
      std::uint64_t kept = 0;
      for (std::uint64_t i = 0; i < count; ++i) {
        if (rs.bernoulli(pi_n)) {
          sum += population.x(rs);
          ++kept;
        }
      }
      const double base_mean = kept == 0 ? 0.0 : sum / static_cast<double>(kept);
      estimates[static_cast<std::size_t>(r)] =
          project(base_mean + rs.laplace(0.0, lambda_n), space);
    });
    RngStream ref = stream.substream(5000 + gi);
    const double dist = distance_to_limit(estimates, result.limit, ref);
    result.points.push_back({n, dist});
    if (gi + 1 == n_grid.size()) {
      result.final_distance = dist;
      result.final_sample = std::move(estimates);
    }
  }
  return result;
}

ConvergenceResult simulate_truncated_convergence(
    const SequenceSpec& pi, const SequenceSpec& delta_trunc, double epsilon,
    const TruncatedPopulation& population, const std::vector<double>& n_grid,
    int replications, RngStream& stream, int threads) {
  if (n_grid.empty() || replications < 1) {
    throw std::invalid_argument("convergence simulation needs a grid and reps");
  }
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("epsilon must be positive");
  }
  ConvergenceResult result;
  result.regime = classify_truncation_regime(pi, delta_trunc);

  LimitParams params;
  params.space = ParamSpace{0.0, 1.0};
  if (result.regime.regime == Regime::kTwmR3) {
    params.theta0 = population.theta0;
  } else if (result.regime.regime == Regime::kTwmR2) {
    // The population law behind b_bar = E[X/W 1{W >= delta_bar}] is not part
    // of the interface; estimate it from a large one-off sample.
    RngStream bs = stream.substream(77);
    const int draws = 2000000;
    double acc = 0.0;
    for (int i = 0; i < draws; ++i) {
      const double w = population.w(bs);
      const double x = population.x(bs);
      if (w >= result.regime.delta_bar) acc += x / w;
    }
    params.theta0 = std::min(1.0, std::max(0.0, acc / draws));
  }
  result.limit = limit_of(result.regime, params);

  const ParamSpace space = params.space;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const double n = n_grid[gi];
    const double delta_n = std::min(1.0, seq_value(delta_trunc, n));
    const auto count = static_cast<std::uint64_t>(n);
    std::vector<double> estimates(static_cast<std::size_t>(replications));
    RngStream grid_stream = stream.substream(2000 + gi);
    parallel_for(replications, threads, [&](int r) {
      RngStream rs = grid_stream.substream(static_cast<std::uint64_t>(r));
      double kept_sum = 0.0;
      double kept = 0.0;
      for (std::uint64_t i = 0; i < count; ++i) {
        const double x = population.x(rs);
        const double w = population.w(rs);
        if (w >= delta_n) {
          kept_sum += x / w;
          kept += 1.0;
        }
      }
      double est;
      if (kept == 0.0) {
        est = rs.uniform01() < 0.5 ? space.lo : space.hi;
      } else {
        const double scale = 1.0 / (epsilon * kept * delta_n);
        est = project(kept_sum / kept + rs.laplace(0.0, scale), space);
      }
      estimates[static_cast<std::size_t>(r)] = est;
    });
    RngStream ref = stream.substream(6000 + gi);
    const double dist = distance_to_limit(estimates, result.limit, ref);
    result.points.push_back({n, dist});
    if (gi + 1 == n_grid.size()) {
      result.final_distance = dist;
      result.final_sample = std::move(estimates);
    }
  }
  return result;
}

}  // namespace dpident
