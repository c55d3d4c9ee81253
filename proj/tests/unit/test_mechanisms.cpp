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
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "dpident/errors.hpp"
#include "dpident/mechanisms.hpp"
#include "dpident/stats.hpp"

using namespace dpident;

namespace {

double laplace_pdf(double z, double scale) {
  return std::exp(-std::fabs(z) / scale) / (2.0 * scale);
}

// Exact output density of the Bernoulli-Laplace mechanism: mixture over all
// 2^N keep patterns of Laplace densities centered at the subset means.
double mixture_density(double t, const std::vector<double>& xs, double pi,
                       double lambda) {
  const std::size_t n = xs.size();
  const double norm = static_cast<double>(n) * pi;
  double density = 0.0;
  for (std::size_t mask = 0; mask < (1u << n); ++mask) {
    double weight = 1.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1u << i)) {
        weight *= pi;
        sum += xs[i];
      } else {
        weight *= 1.0 - pi;
      }
    }
    if (weight == 0.0) continue;
    density += weight * laplace_pdf(t - sum / norm, lambda);
  }
  return density;
}

}  // namespace

TEST_CASE("bernoulli-laplace epsilon closed form") {
  CHECK(bernoulli_laplace_epsilon(100, 0.5, 1.0) ==
        doctest::Approx(std::log(0.5 + 0.5 * std::exp(0.02))).epsilon(1e-12));
  CHECK(bernoulli_laplace_epsilon(100, 0.5, 1.0) ==
        doctest::Approx(0.0100503).epsilon(1e-4));
  // pi = 1 with enormous lambda: epsilon collapses to zero.
  CHECK(bernoulli_laplace_epsilon(100, 1.0, 1e12) < 1e-10);
  // lambda -> 0 blows past the exponent range.
  CHECK(std::isinf(bernoulli_laplace_epsilon(100, 0.5, 1e-10)));
  CHECK(bernoulli_laplace_sufficient(100, 0.5, 1.0, 0.52));
  CHECK_FALSE(bernoulli_laplace_sufficient(100, 0.5, 1.0, 0.4));
}

TEST_CASE("exhaustive subset enumeration certifies the likelihood-ratio bound") {
  // Adjacent samples: the last record flips between the extremes 0 and 1,
  // the configuration the bound's derivation is sharp for.
  for (int n : {1, 2, 3, 5, 7, 10}) {
    for (double pi : {0.25, 0.5, 1.0}) {
      for (double lambda : {0.1, 1.0}) {
        std::vector<double> xs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          xs[static_cast<std::size_t>(i)] = 0.1 + 0.8 * i / std::max(1, n - 1);
        }
        std::vector<double> xs_prime = xs;
        xs.back() = 0.0;
        xs_prime.back() = 1.0;
        const double eps = bernoulli_laplace_epsilon(n, pi, lambda);
        const double cap = std::exp(eps) + 1e-9;
        double worst = 0.0;
        for (int g = 0; g <= 100; ++g) {
          const double t = -6.0 * lambda + (1.0 / (pi) + 12.0 * lambda) * g / 100.0;
          const double f = mixture_density(t, xs, pi, lambda);
          const double f_prime = mixture_density(t, xs_prime, pi, lambda);
          if (f_prime > 0.0) worst = std::max(worst, f / f_prime);
          if (f > 0.0) worst = std::max(worst, f_prime / f);
        }
        CAPTURE(n);
        CAPTURE(pi);
        CAPTURE(lambda);
        CHECK(worst <= cap);
      }
    }
  }
}

TEST_CASE("laplace mean mechanism") {
  RngStream stream(21, 0);
  const Dataset data = Dataset::univariate(std::vector<double>(100, 0.5));
  const MechanismReport rep = laplace_mean_dp(data, 1e9, stream);
  CHECK(rep.estimate == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(rep.privacy.epsilon == 1e9);
  CHECK(rep.privacy.delta == 0.0);

  RngStream stream2(21, 1);
  const MechanismReport rep2 = laplace_mean_dp(data, 1.0, stream2);
  CHECK(rep2.scale_params.at("lambda") == doctest::Approx(0.01));
  CHECK(rep2.estimate ==
        project(rep2.raw_statistic + rep2.noise_draw, ParamSpace{0.0, 1.0}));

  const Dataset bad = Dataset::univariate({0.5, 1.5});
  CHECK_THROWS_AS(laplace_mean_dp(bad, 1.0, stream), SupportViolationError);
}

TEST_CASE("exponential mean mechanism delta accounting") {
  RngStream stream(22, 0);
  const Dataset one = Dataset::univariate({0.3});
  const MechanismReport rep = exponential_mean_dp(one, 1.0, 0.25, stream);
  CHECK(rep.privacy.delta ==
        doctest::Approx(normal_cdf(-0.5)).epsilon(1e-12));
  CHECK(rep.privacy.delta == doctest::Approx(0.30854).epsilon(1e-4));

  const Dataset big = Dataset::univariate(std::vector<double>(10000, 0.5));
  RngStream stream2(22, 1);
  const MechanismReport rep2 = exponential_mean_dp(big, 1.0, 0.25, stream2);
  CHECK(rep2.privacy.delta < 1e-20);
  CHECK(rep2.scale_params.at("sd") ==
        doctest::Approx(1.0 / std::pow(10000.0, 0.75)).epsilon(1e-12));
}

TEST_CASE("truncated weighted mean mechanism") {
  RngStream stream(23, 0);
  // All weights 1: raw statistic equals the plain mean of x.
  const Dataset plain = Dataset::weighted({0.2, 0.4, 0.9}, {1.0, 1.0, 1.0});
  const MechanismReport rep = truncated_weighted_mean_dp(
      plain, 1e9, 0.5, TruncatedKind::kLaplace, 0.25, stream);
  CHECK(rep.raw_statistic == doctest::Approx(0.5).epsilon(1e-12));
  CHECK_FALSE(rep.all_truncated);

  // Everything truncated: projected pure noise, flagged.
  const Dataset low = Dataset::weighted({0.2, 0.4}, {0.3, 0.2});
  RngStream stream2(23, 1);
  const MechanismReport rep2 = truncated_weighted_mean_dp(
      low, 1.0, 1.0, TruncatedKind::kLaplace, 0.25, stream2);
  CHECK(rep2.all_truncated);
  CHECK((rep2.estimate == 0.0 || rep2.estimate == 1.0));

  // Scale 1/(eps N pi_hat delta): 1/(1000 * 0.5 * 0.1) = 0.02.
  std::vector<double> x(1000, 0.25), w(1000);
  for (int i = 0; i < 1000; ++i) w[static_cast<std::size_t>(i)] = i < 500 ? 0.05 : 0.5;
  RngStream stream3(23, 2);
  const MechanismReport rep3 = truncated_weighted_mean_dp(
      Dataset::weighted(x, w), 1.0, 0.1, TruncatedKind::kLaplace, 0.25, stream3);
  CHECK(rep3.scale_params.at("pi_hat") == doctest::Approx(0.5));
  CHECK(rep3.scale_params.at("scale") == doctest::Approx(0.02).epsilon(1e-12));

  // Exponential variant: delta uses the effective size N pi_hat.
  RngStream stream4(23, 3);
  const MechanismReport rep4 = truncated_weighted_mean_dp(
      Dataset::weighted(x, w), 1.0, 0.1, TruncatedKind::kExponential, 0.25,
      stream4);
  CHECK(rep4.privacy.delta ==
        doctest::Approx(normal_cdf(-std::pow(500.0, 0.25) + 0.5)).epsilon(1e-12));
}

TEST_CASE("bernoulli-laplace mechanism determinism and extremes") {
  const Dataset data = Dataset::univariate({0.1, 0.4, 0.6, 0.9});
  RngStream a(31, 5), b(31, 5);
  const double e1 = bernoulli_laplace_mean(data, 0.5, 1.0, a).estimate;
  const double e2 = bernoulli_laplace_mean(data, 0.5, 1.0, b).estimate;
  CHECK(e1 == e2);

  RngStream c(31, 6);
  const MechanismReport tiny_noise =
      bernoulli_laplace_mean(data, 1.0, 1e-14, c);
  CHECK(tiny_noise.estimate == doctest::Approx(0.5).epsilon(1e-10));

  // Huge lambda: projection pushes the output onto the boundary atoms.
  int at_boundary = 0;
  for (int i = 0; i < 200; ++i) {
    RngStream s(32, static_cast<std::uint64_t>(i));
    const double est = bernoulli_laplace_mean(data, 1.0, 1e6, s).estimate;
    if (est == 0.0 || est == 1.0) ++at_boundary;
  }
  CHECK(at_boundary >= 198);
}

TEST_CASE("discrepancy closed forms") {
  CHECK(discrepancy({NoiseFamily::Kind::kLaplace, 1.0}, 0.5, -10.0, 10.0) ==
        doctest::Approx(0.5).epsilon(1e-12));
  CHECK(discrepancy({NoiseFamily::Kind::kLaplace, 2.0}, 0.0, -1.0, 1.0) == 0.0);
  CHECK(discrepancy({NoiseFamily::Kind::kGaussian, 1.0}, 1.0, 0.0, 2.0) ==
        doctest::Approx(2.5).epsilon(1e-12));

  // D <= |Delta|/lambda everywhere, equality once the window is wide.
  RngStream stream(41, 0);
  for (int i = 0; i < 200; ++i) {
    const double lambda = stream.uniform(0.1, 3.0);
    const double delta = stream.uniform(-2.0, 2.0);
    const double a = stream.uniform(-5.0, 0.0);
    const double b = a + stream.uniform(0.1, 10.0);
    const double d = discrepancy({NoiseFamily::Kind::kLaplace, lambda}, delta, a, b);
    CHECK(d <= std::fabs(delta) / lambda + 1e-12);
  }
  CHECK(discrepancy({NoiseFamily::Kind::kLaplace, 0.7}, 1.3, -50.0, 50.0) ==
        doctest::Approx(1.3 / 0.7).epsilon(1e-12));

  // AC1 behavior: increasing without bound as the variance shrinks.
  double prev = 0.0;
  for (double s2 : {1.0, 0.1, 0.01, 0.001}) {
    const double d = discrepancy({NoiseFamily::Kind::kGaussian, std::sqrt(s2)},
                                 0.5, -1.0, 1.0);
    CHECK(d > prev);
    prev = d;
  }
}

TEST_CASE("no-truncation violation probabilities") {
  CHECK(no_truncation_violation(TruncatedKind::kLaplace, 1.0, 1.0, 1.0, 10, 0.25) ==
        0.0);
  CHECK(no_truncation_violation(TruncatedKind::kLaplace, 3.0, 1.0, 1.0, 10, 0.25) ==
        doctest::Approx(1.0 - std::exp(-2.0)).epsilon(1e-12));
  CHECK(no_truncation_violation(TruncatedKind::kLaplace, 1e6, 1.0, 1.0, 10, 0.25) ==
        doctest::Approx(1.0).epsilon(1e-9));
  CHECK(no_truncation_violation(TruncatedKind::kExponential, 1e6, 1.0, 1.0, 100,
                                0.25) == doctest::Approx(1.0).epsilon(1e-9));
  // Below the epsilon threshold the Laplace ratio can never exceed epsilon.
  CHECK(no_truncation_violation(TruncatedKind::kLaplace, 0.5, 1.0, 1.0, 10, 0.25) ==
        0.0);
}

TEST_CASE("audit: identical datasets give epsilon near zero") {
  const Dataset d = Dataset::univariate({0.2, 0.8, 0.5});
  RngStream stream(51, 0);
  auto mech = [](const Dataset& data, RngStream& s) {
    return laplace_mean_dp(data, 1.0, s).estimate;
  };
  const AuditResult res = audit_dp(mech, d, d, 20000, 0.0, stream);
  CHECK_FALSE(res.disjoint_support);
  CHECK(res.epsilon_hat < res.half_width);
}

TEST_CASE("audit: laplace mechanism stays within the analytic bound") {
  std::vector<double> x(10, 0.0);
  const Dataset d = Dataset::univariate(x);
  x[0] = 1.0;
  const Dataset d_prime = Dataset::univariate(x);
  RngStream stream(52, 0);
  auto mech = [](const Dataset& data, RngStream& s) {
    return laplace_mean_dp(data, 1.0, s).estimate;
  };
  const AuditResult res = audit_dp(mech, d, d_prime, 100000, 0.0, stream);
  CHECK(res.epsilon_hat <= 1.0 + 3.0 * res.half_width);
  // The full-range record change makes the bound sharp; the audit should see
  // most of it.
  CHECK(res.epsilon_hat > 0.7);
}

TEST_CASE("audit: zero-noise mechanism is flagged as disjoint") {
  std::vector<double> x(10, 0.0);
  const Dataset d = Dataset::univariate(x);
  x[0] = 1.0;
  const Dataset d_prime = Dataset::univariate(x);
  RngStream stream(53, 0);
  auto mech = [](const Dataset& data, RngStream&) {
    double s = 0.0;
    for (double v : data.x()) s += v;
    return s / static_cast<double>(data.size());
  };
  const AuditResult res = audit_dp(mech, d, d_prime, 10000, 0.0, stream);
  CHECK(res.disjoint_support);
  CHECK(std::isinf(res.epsilon_hat));
}

TEST_CASE("audit: adjacency violations are rejected") {
  const Dataset d = Dataset::univariate({0.0, 0.0, 0.0});
  const Dataset two_changes = Dataset::univariate({1.0, 1.0, 0.0});
  const Dataset wrong_size = Dataset::univariate({0.0, 0.0});
  RngStream stream(54, 0);
  auto mech = [](const Dataset& data, RngStream& s) {
    return laplace_mean_dp(data, 1.0, s).estimate;
  };
  CHECK_THROWS_AS(audit_dp(mech, d, two_changes, 10000, 0.0, stream),
                  AdjacencyViolationError);
  CHECK_THROWS_AS(audit_dp(mech, d, wrong_size, 10000, 0.0, stream),
                  AdjacencyViolationError);
}
