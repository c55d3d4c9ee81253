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
#include "dpident/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dpident/errors.hpp"
#include "dpident/parallel.hpp"
#include "dpident/stats.hpp"

namespace dpident {

namespace {

void require_unit_interval(const std::vector<double>& v, const char* name) {
  for (double x : v) {
    if (!(x >= 0.0 && x <= 1.0)) {
      throw SupportViolationError(std::string(name) + " outside [0,1]");
    }
  }
}

void require_univariate(const Dataset& data, const char* op) {
  if (data.shape() != DatasetShape::kUnivariate || data.size() == 0) {
    throw std::invalid_argument(std::string(op) +
                                " requires a nonempty univariate dataset");
  }
}

}  // namespace

MechanismReport laplace_mean_dp(const Dataset& data, double epsilon,
                                RngStream& stream, const ParamSpace& space) {
  require_univariate(data, "laplace_mean_dp");
  require_unit_interval(data.x(), "x");
  if (!(epsilon > 0.0)) {
    throw std::invalid_argument("laplace_mean_dp requires epsilon > 0");
  }
  const double n = static_cast<double>(data.size());
  const double scale = 1.0 / (epsilon * n);
  MechanismReport rep;
  rep.mechanism = "laplace_mean";
  rep.raw_statistic = mean(data.x());
  rep.noise_draw = stream.laplace(0.0, scale);
  rep.estimate = project(rep.raw_statistic + rep.noise_draw, space);
  rep.privacy = PrivacyParams{epsilon, 0.0};
  rep.scale_params = {{"lambda", scale}};
  rep.seed = stream.seed();
  rep.stream_id = stream.stream_id();
  return rep;
}

MechanismReport exponential_mean_dp(const Dataset& data, double epsilon,
                                    double gamma, RngStream& stream,
                                    const ParamSpace& space) {
  require_univariate(data, "exponential_mean_dp");
  require_unit_interval(data.x(), "x");
  if (!(epsilon > 0.0) || !(gamma > 0.0 && gamma < 0.5)) {
    throw std::invalid_argument(
        "exponential_mean_dp requires epsilon > 0 and gamma in (0, 0.5)");
  }
  const double n = static_cast<double>(data.size());
  const double sd = 1.0 / (epsilon * std::pow(n, 1.0 - gamma));
  MechanismReport rep;
  rep.mechanism = "exponential_mean";
  rep.raw_statistic = mean(data.x());
  rep.noise_draw = stream.normal(0.0, sd);
  rep.estimate = project(rep.raw_statistic + rep.noise_draw, space);
  rep.privacy = PrivacyParams{
      epsilon, normal_cdf(-std::pow(n, gamma) + 0.5 * epsilon)};
  rep.scale_params = {{"sd", sd}, {"gamma", gamma}};
  rep.seed = stream.seed();
  rep.stream_id = stream.stream_id();
  return rep;
}

MechanismReport truncated_weighted_mean_dp(const Dataset& data, double epsilon,
                                           double delta_trunc,
                                           TruncatedKind kind, double gamma,
                                           RngStream& stream) {
  if (data.shape() != DatasetShape::kWeighted || data.size() == 0) {
    throw std::invalid_argument(
        "truncated_weighted_mean_dp requires a nonempty weighted dataset");
  }
  require_unit_interval(data.x(), "x");
  require_unit_interval(data.w(), "w");
  if (!(epsilon > 0.0) || !(delta_trunc > 0.0 && delta_trunc <= 1.0)) {
    throw std::invalid_argument(
        "truncated_weighted_mean_dp requires epsilon > 0, delta in (0,1]");
  }
  if (kind == TruncatedKind::kExponential && !(gamma > 0.0 && gamma < 0.5)) {
    throw std::invalid_argument("exponential kind requires gamma in (0, 0.5)");
  }
  const ParamSpace unit{0.0, 1.0};
  const double n = static_cast<double>(data.size());
  double kept_sum = 0.0;
  double kept = 0.0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data.w()[i] >= delta_trunc) {
      kept_sum += data.x()[i] / data.w()[i];
      kept += 1.0;
    }
  }
  const double pi_hat = kept / n;

  MechanismReport rep;
  rep.mechanism = kind == TruncatedKind::kLaplace
                      ? "truncated_weighted_mean_laplace"
                      : "truncated_weighted_mean_exponential";
  rep.seed = stream.seed();
  rep.stream_id = stream.stream_id();
  rep.scale_params = {{"pi_hat", pi_hat}, {"delta_trunc", delta_trunc}};

  if (pi_hat == 0.0) {
    // Every weight fell below the threshold; the noise scale diverges, so the
    // projected output is a fair coin on the parameter-space endpoints.
    rep.all_truncated = true;
    rep.raw_statistic = 0.0;
    rep.noise_draw = stream.uniform01() < 0.5 ? -kInf : kInf;
    rep.estimate = project(rep.noise_draw, unit);
    rep.privacy = PrivacyParams{epsilon, 0.0};
    rep.scale_params["scale"] = kInf;
    return rep;
  }

  const double eff = n * pi_hat;  // surviving count
  rep.raw_statistic = kept_sum / eff;
  if (kind == TruncatedKind::kLaplace) {
    const double scale = 1.0 / (epsilon * eff * delta_trunc);
    rep.noise_draw = stream.laplace(0.0, scale);
    rep.privacy = PrivacyParams{epsilon, 0.0};
    rep.scale_params["scale"] = scale;
  } else {
    const double sd =
        1.0 / (epsilon * delta_trunc * std::pow(eff, 1.0 - gamma));
    rep.noise_draw = stream.normal(0.0, sd);
    rep.privacy = PrivacyParams{
        epsilon, normal_cdf(-std::pow(eff, gamma) + 0.5 * epsilon)};
    rep.scale_params["scale"] = sd;
    rep.scale_params["gamma"] = gamma;
  }
  rep.estimate = project(rep.raw_statistic + rep.noise_draw, unit);
  return rep;
}

MechanismReport bernoulli_laplace_mean(const Dataset& data, double pi,
                                       double lambda, RngStream& stream,
                                       const ParamSpace& space) {
  require_univariate(data, "bernoulli_laplace_mean");
  if (!(pi > 0.0 && pi <= 1.0) || !(lambda > 0.0)) {
    throw std::invalid_argument(
        "bernoulli_laplace_mean requires pi in (0,1] and lambda > 0");
  }
  const double n = static_cast<double>(data.size());
  double kept_sum = 0.0;
  for (double x : data.x()) {
    if (stream.bernoulli(pi)) kept_sum += x;
  }
  MechanismReport rep;
  rep.mechanism = "bernoulli_laplace_mean";
  rep.raw_statistic = kept_sum / (n * pi);
  rep.noise_draw = stream.laplace(0.0, lambda);
  rep.estimate = project(rep.raw_statistic + rep.noise_draw, space);
  rep.privacy =
      PrivacyParams{std::min(bernoulli_laplace_epsilon(n, pi, lambda), 1e308),
                    0.0};
  rep.scale_params = {{"pi", pi}, {"lambda", lambda}};
  rep.seed = stream.seed();
  rep.stream_id = stream.stream_id();
  return rep;
}

double bernoulli_laplace_epsilon(double n, double pi, double lambda) {
  if (!(n >= 1.0) || !(pi > 0.0 && pi <= 1.0) || !(lambda > 0.0)) {
    throw std::invalid_argument(
        "bernoulli_laplace_epsilon requires N >= 1, pi in (0,1], lambda > 0");
  }
  const double exponent = 1.0 / (n * lambda * pi);
  if (exponent > 700.0) return kInf;
  return std::log1p(pi * std::expm1(exponent));
}

bool bernoulli_laplace_sufficient(double n, double pi, double lambda,
                                  double candidate_epsilon) {
  const double exponent = 1.0 / (n * lambda * pi);
  if (exponent > 700.0) return false;
  return candidate_epsilon >= pi * std::exp(exponent);
}

double discrepancy(const NoiseFamily& family, double delta_shift, double a,
                   double b) {
  if (!(a < b)) throw std::invalid_argument("discrepancy requires a < b");
  if (!(family.scale > 0.0)) {
    throw std::invalid_argument("discrepancy requires a positive scale");
  }
  if (delta_shift == 0.0) return 0.0;
  if (family.kind == NoiseFamily::Kind::kGaussian) {
    const double s2 = family.scale * family.scale;
    const double at_a = std::fabs(delta_shift * (2.0 * a + delta_shift));
    const double at_b = std::fabs(delta_shift * (2.0 * b + delta_shift));
    return std::max(at_a, at_b) / (2.0 * s2);
  }
  // Laplace: sup over [a,b] of | |z| - |z + delta| | / lambda; the piecewise
  // linear inner function has breakpoints at 0, -delta and -delta/2.
  auto g = [&](double z) {
    return std::fabs(std::fabs(z) - std::fabs(z + delta_shift));
  };
  double best = std::max(g(a), g(b));
  for (double z : {0.0, -delta_shift, -0.5 * delta_shift}) {
    if (z > a && z < b) best = std::max(best, g(z));
  }
  return best / family.scale;
}

double no_truncation_violation(TruncatedKind kind, double c_scale, double delta,
                               double epsilon, double n, double gamma) {
  if (!(c_scale > 0.0) || !(delta > 0.0)) {
    throw std::invalid_argument(
        "no_truncation_violation requires C > 0 and Delta > 0");
  }
  const double cd = c_scale * delta;
  if (kind == TruncatedKind::kLaplace) {
    if (cd < epsilon) return 0.0;
    return 1.0 - std::exp(epsilon - cd);
  }
  if (!(n >= 1.0) || !(gamma > 0.0)) {
    throw std::invalid_argument("exponential kind requires N >= 1, gamma > 0");
  }
  const double ng = std::pow(n, gamma);
  return normal_cdf(cd / (2.0 * ng) - (epsilon / cd) * ng);
}

namespace {

void require_adjacent(const Dataset& d, const Dataset& d_prime) {
  if (d.shape() != d_prime.shape() || d.size() != d_prime.size()) {
    throw AdjacencyViolationError("datasets differ in shape or size");
  }
  int differing = 0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    bool same = d.x()[i] == d_prime.x()[i];
    if (d.has_w() || d_prime.has_w()) {
      same = same && d.has_w() && d_prime.has_w() && d.w()[i] == d_prime.w()[i];
    }
    if (!d.y().empty() || !d_prime.y().empty()) {
      same = same && d.y()[i] == d_prime.y()[i];
    }
    if (d.has_d() || d_prime.has_d()) {
      same = same && d.has_d() && d_prime.has_d() && d.d()[i] == d_prime.d()[i];
    }
    if (!same) ++differing;
  }
  if (differing > 1) {
    throw AdjacencyViolationError("datasets differ in more than one record");
  }
}

}  // namespace

AuditResult audit_dp(const MechanismFn& mechanism, const Dataset& d,
                     const Dataset& d_prime, int trials, double delta,
                     RngStream& stream, int grid_points) {
  if (trials < 10000) {
    throw std::invalid_argument("audit_dp requires at least 10^4 trials");
  }
  if (grid_points < 3) {
    throw std::invalid_argument("audit_dp requires at least 3 grid points");
  }
  require_adjacent(d, d_prime);

  // Trials run on independent substreams and land in per-trial slots, so the
  // audit is deterministic regardless of the worker count.
  std::vector<double> out_p(static_cast<std::size_t>(trials));
  std::vector<double> out_q(static_cast<std::size_t>(trials));
  parallel_for(trials, 0, [&](int i) {
    RngStream sp = stream.substream(static_cast<std::uint64_t>(2 * i));
    RngStream sq = stream.substream(static_cast<std::uint64_t>(2 * i + 1));
    out_p[static_cast<std::size_t>(i)] = mechanism(d, sp);
    out_q[static_cast<std::size_t>(i)] = mechanism(d_prime, sq);
  });

  // Threshold grid spanning the pooled outputs by +-6 pooled sd around the
  // pooled mean, the audit's event family.
  std::vector<double> pooled = out_p;
  pooled.insert(pooled.end(), out_q.begin(), out_q.end());
  const double center = mean(pooled);
  double spread = sample_sd(pooled);
  if (!(spread > 0.0)) spread = 1.0;
  std::sort(out_p.begin(), out_p.end());
  std::sort(out_q.begin(), out_q.end());

  const double t_count = static_cast<double>(trials);
  const double floor_prob = 1.0 / (t_count + 2.0);
  AuditResult res;
  res.trials = trials;
  double best = -kInf;
  double best_var = 0.0;
  for (int g = 0; g < grid_points; ++g) {
    const double t = center - 6.0 * spread +
                     12.0 * spread * static_cast<double>(g) /
                         static_cast<double>(grid_points - 1);
    const auto cp = static_cast<double>(
        std::upper_bound(out_p.begin(), out_p.end(), t) - out_p.begin());
    const auto cq = static_cast<double>(
        std::upper_bound(out_q.begin(), out_q.end(), t) - out_q.begin());
    if ((cp == t_count && cq == 0.0) || (cq == t_count && cp == 0.0)) {
      res.disjoint_support = true;
    }
    const double p_hat = (cp + 1.0) / (t_count + 2.0);
    const double q_hat = (cq + 1.0) / (t_count + 2.0);
    for (const auto& [num, den] : {std::pair{p_hat, q_hat},
                                   std::pair{q_hat, p_hat}}) {
      const double ratio = std::log(std::max(num - delta, floor_prob) / den);
      if (ratio > best) {
        best = ratio;
        res.binding_threshold = t;
        best_var = (1.0 - num) / ((t_count + 2.0) * num) +
                   (1.0 - den) / ((t_count + 2.0) * den);
      }
    }
  }
  if (res.disjoint_support) {
    res.epsilon_hat = kInf;
    res.half_width = 0.0;
    return res;
  }
  res.epsilon_hat = std::max(0.0, best);
  // Width of the max statistic over ~2 * grid_points correlated events: a
  // sqrt(2 log m) selection term plus a one-sided normal quantile.
  const double m_events = 2.0 * static_cast<double>(grid_points);
  res.half_width =
      (std::sqrt(2.0 * std::log(m_events)) + 1.645) * std::sqrt(best_var);
  return res;
}

}  // namespace dpident
