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
// End-to-end acceptance suite. Each criterion prints one [PASS]/[FAIL] line;
// the process exits nonzero if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "dpident/data_model.hpp"
#include "dpident/diagnostics.hpp"
#include "dpident/identification.hpp"
#include "dpident/kernels.hpp"
#include "dpident/mechanisms.hpp"
#include "dpident/montecarlo.hpp"
#include "dpident/rdd.hpp"
#include "dpident/regimes.hpp"
#include "dpident/sensitivity.hpp"
#include "dpident/stats.hpp"

using namespace dpident;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool pass,
            const std::string& detail) {
  std::printf("[%s] criterion %d: %s — %s\n", pass ? "PASS" : "FAIL", criterion,
              name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// --- criterion 1 ------------------------------------------------------------

void criterion1_table_bands() {
  const auto start = std::chrono::steady_clock::now();
  ScenarioConfig config;
  config.sims = 2000;
  config.n_values = {500, 2000, 5000};
  config.noise_variances = {0.0, 0.002, 2.0, 200.0};
  config.alphas = {0.05};
  config.master_seed = 20260808;
  const RejectionTable table = run_rejection_table(config);
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
          .count();

  bool zero_ok = true;
  std::string zero_detail;
  for (int n : {500, 2000, 5000}) {
    const double rate = table.rate(n, 0.0, 0.05);
    zero_ok = zero_ok && rate >= 0.99;
    zero_detail += "N=" + std::to_string(n) + ":" + fmt(rate) + " ";
  }
  report(1, "variance 0 rejection >= 0.99 at N in {500,2000,5000}", zero_ok,
         zero_detail);

  const double r0002 = table.rate(500, 0.002, 0.05);
  report(1, "variance 0.002, N=500, 5% in [0.50, 0.85] (reference 0.6846)",
         r0002 >= 0.50 && r0002 <= 0.85,
         "measured " + fmt(r0002) +
             "; this band is jointly infeasible with the variance-0 band: "
             "variance-0 power >= 0.99 forces se <= 0.07, and with noise sd "
             "0.045 the size-0.05 noise-corrected critical then leaves power "
             ">= 0.951 for ANY se <= 0.07 (the one critical rule that lands "
             "in-band has true size 0.004 and drops the variance-2/200 cells "
             "to ~0.02, below their own bands)");

  const double r2 = table.rate(500, 2.0, 0.05);
  report(1, "variance 2, N=500, 5% in [0.03, 0.12] (reference 0.0666)",
         r2 >= 0.03 && r2 <= 0.12, "measured " + fmt(r2));
  const double r200 = table.rate(500, 200.0, 0.05);
  report(1, "variance 200, N=500, 5% in [0.03, 0.10] (reference 0.056)",
         r200 >= 0.03 && r200 <= 0.10, "measured " + fmt(r200));

  // Monotonicity in variance at every cell, within 2 MC sd.
  const double mc_sd = std::sqrt(0.25 / config.sims);
  bool monotone = true;
  std::string mono_detail;
  for (int n : {500, 2000, 5000}) {
    double prev = 2.0;
    for (double v : config.noise_variances) {
      const double rate = table.rate(n, v, 0.05);
      if (rate > prev + 2.0 * mc_sd) {
        monotone = false;
        mono_detail += "violation at N=" + std::to_string(n) + ",v=" + fmt(v) +
                       " (" + fmt(rate) + ">" + fmt(prev) + ") ";
      }
      prev = rate;
    }
  }
  report(1, "rejection monotone in noise variance at every cell",
         monotone, monotone ? "all 12 cells ordered within 2 MC sd"
                            : mono_detail);
  report(1, "runtime under 10 minutes with parallel replications", secs < 600.0,
         fmt(secs) + " s");
}

// --- criterion 2 ------------------------------------------------------------

std::optional<double> weighted_mean_estimator(const Dataset& d) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    num += d.w()[i] * d.x()[i];
    den += d.w()[i];
  }
  if (!(den > 0.0)) return std::nullopt;
  return num / den;
}

void criterion2_sensitivity_oracle() {
  bool lemmas_ok = true;
  double worst = 0.0;
  for (int t : {1, 2, 3}) {
    for (double c1 : {0.0, 0.5, 1.0}) {
      for (double c2 : {c1, 1.0, 2.0}) {
        if (!(c2 > 0.0) || c2 < c1) continue;
        for (auto [d1, d2] : std::vector<std::pair<double, double>>{
                 {0.0, 1.0}, {-1.0, 1.0}}) {
          SensitivityGrid grid;
          grid.x = {d1, 0.5 * (d1 + d2), d2};
          grid.w = c1 == c2 ? std::vector<double>{c1}
                            : std::vector<double>{c1, 0.5 * (c1 + c2), c2};
          const double brute = brute_force_sensitivity(
              weighted_mean_estimator, DatasetShape::kWeighted, grid, t + 1);
          const double gap = std::fabs(
              brute - weighted_mean_sensitivity_replace(t, c1, c2, d1, d2));
          worst = std::max(worst, gap);
          lemmas_ok = lemmas_ok && gap < 1e-9;
        }
      }
    }
  }
  report(2, "weighted-mean lemma closed forms equal enumeration (T <= 3)",
         lemmas_ok, "worst gap " + fmt(worst));

  const KernelSpec uniform = make_kernel(KernelId::kUniform);
  bool boundary_ok = true;
  double worst_b = 0.0;
  struct Config {
    int m_l, m_r, n;
    double y_right_max;
  };
  for (const Config& cfg : std::vector<Config>{{2, 2, 6, 1.0},
                                               {1, 2, 5, 1.0},
                                               {1, 1, 4, 1.0},
                                               {2, 3, 6, 1.0},
                                               {2, 2, 6, 0.5}}) {
    auto estimator = [&cfg](const Dataset& d) -> std::optional<double> {
      double ls = 0.0, rs = 0.0;
      int l = 0, r = 0;
      for (std::size_t i = 0; i < d.size(); ++i) {
        if (d.x()[i] >= 0.0) {
          if (d.y()[i] > cfg.y_right_max) return std::nullopt;
          rs += d.y()[i];
          ++r;
        } else {
          ls += d.y()[i];
          ++l;
        }
      }
      if (l < cfg.m_l || r < cfg.m_r) return std::nullopt;
      return rs / r - ls / l;
    };
    SensitivityGrid grid;
    grid.x = {-0.5, 0.5};
    grid.y = {0.0, 0.5, 1.0};
    const double brute =
        brute_force_sensitivity(estimator, DatasetShape::kRdd, grid, cfg.n);
    const auto rep = nr_boundary_sensitivity(uniform, Interval{0.0, 1.0},
                                             Interval{0.0, cfg.y_right_max},
                                             cfg.m_l, cfg.m_r, cfg.n);
    const double gap = std::fabs(rep.value - brute);
    worst_b = std::max(worst_b, gap);
    boundary_ok = boundary_ok && gap < 1e-9;
  }
  report(2, "uniform-kernel boundary regression equals enumeration (n <= 6)",
         boundary_ok, "worst gap " + fmt(worst_b));

  bool mean_ok = true;
  double worst_mean = 0.0;
  auto mean_est = [](const Dataset& d) -> std::optional<double> {
    double s = 0.0;
    for (double x : d.x()) s += x;
    return s / static_cast<double>(d.size());
  };
  SensitivityGrid mean_grid;
  mean_grid.x = {0.0, 0.5, 1.0};
  for (int n = 1; n <= 8; ++n) {
    const double brute = brute_force_sensitivity(
        mean_est, DatasetShape::kUnivariate, mean_grid, n);
    // Exact up to one rounding ulp of the division for non-dyadic N.
    const double gap = std::fabs(brute - 1.0 / n);
    worst_mean = std::max(worst_mean, gap);
    mean_ok = mean_ok && gap <= 1e-15;
  }
  report(2, "sample-mean sensitivity equals 1/N for N <= 8", mean_ok,
         "worst gap " + fmt(worst_mean) + " (one division ulp)");
}

// --- criterion 3 ------------------------------------------------------------

double laplace_pdf(double z, double scale) {
  return std::exp(-std::fabs(z) / scale) / (2.0 * scale);
}

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

void criterion3_dp_accounting() {
  bool enum_ok = true;
  double worst_excess = -1.0;
  for (int n = 1; n <= 10; ++n) {
    for (double pi : {0.25, 0.5, 1.0}) {
      for (double lambda : {0.1, 1.0}) {
        std::vector<double> xs(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
          xs[static_cast<std::size_t>(i)] = 0.1 + 0.8 * i / std::max(1, n - 1);
        }
        std::vector<double> xs_prime = xs;
        xs.back() = 0.0;
        xs_prime.back() = 1.0;
        const double cap =
            std::exp(bernoulli_laplace_epsilon(n, pi, lambda)) + 1e-9;
        for (int g = 0; g <= 100; ++g) {
          const double t =
              -6.0 * lambda + (1.0 / pi + 12.0 * lambda) * g / 100.0;
          const double f = mixture_density(t, xs, pi, lambda);
          const double fp = mixture_density(t, xs_prime, pi, lambda);
          const double ratio = std::max(f / fp, fp / f);
          worst_excess = std::max(worst_excess, ratio - cap);
          enum_ok = enum_ok && ratio <= cap;
        }
      }
    }
  }
  report(3, "exhaustive keep-pattern enumeration certifies epsilon (N <= 10)",
         enum_ok, "max ratio minus bound " + fmt(worst_excess));

  // 12-configuration audit matrix at 1e5 trials.
  struct AuditConfig {
    std::string name;
    MechanismFn fn;
    Dataset d;
    Dataset d_prime;
    double epsilon;
    double delta;
  };
  std::vector<AuditConfig> configs;
  auto unit_data = [](int n, double first) {
    std::vector<double> x(static_cast<std::size_t>(n), 0.25);
    x[0] = first;
    return Dataset::univariate(x);
  };
  for (double eps : {0.5, 1.0, 2.0}) {
    for (int n : {10, 40}) {
      configs.push_back(
          {"laplace eps=" + fmt(eps) + " N=" + std::to_string(n),
           [eps](const Dataset& d, RngStream& s) {
             return laplace_mean_dp(d, eps, s).estimate;
           },
           unit_data(n, 0.0), unit_data(n, 1.0), eps, 0.0});
    }
  }
  for (double eps : {0.5, 1.0}) {
    const int n = 25;
    configs.push_back(
        {"exponential eps=" + fmt(eps),
         [eps](const Dataset& d, RngStream& s) {
           return exponential_mean_dp(d, eps, 0.25, s).estimate;
         },
         unit_data(n, 0.0), unit_data(n, 1.0), eps,
         normal_cdf(-std::pow(25.0, 0.25) + 0.5 * eps)});
  }
  {
    std::vector<double> x(60, 0.5), w(60, 0.8);
    Dataset d = Dataset::weighted(x, w);
    x[0] = 1.0;
    w[0] = 0.4;
    Dataset d_prime = Dataset::weighted(x, w);
    for (double eps : {1.0, 2.0}) {
      configs.push_back(
          {"truncated eps=" + fmt(eps),
           [eps](const Dataset& data, RngStream& s) {
             return truncated_weighted_mean_dp(data, eps, 0.1,
                                               TruncatedKind::kLaplace, 0.25, s)
                 .estimate;
           },
           d, d_prime, eps, 0.0});
    }
  }
  for (double lambda : {0.5, 1.0}) {
    const int n = 20;
    configs.push_back(
        {"bernoulli-laplace lambda=" + fmt(lambda),
         [lambda](const Dataset& d, RngStream& s) {
           return bernoulli_laplace_mean(d, 0.5, lambda, s).estimate;
         },
         unit_data(n, 0.0), unit_data(n, 1.0),
         bernoulli_laplace_epsilon(20, 0.5, lambda), 0.0});
  }

  bool audit_ok = true;
  std::string audit_detail;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    RngStream stream(424242, i);
    const AuditResult res = audit_dp(configs[i].fn, configs[i].d,
                                     configs[i].d_prime, 100000,
                                     configs[i].delta, stream);
    const bool ok = !res.disjoint_support &&
                    res.epsilon_hat <= configs[i].epsilon + res.half_width;
    if (!ok) {
      audit_ok = false;
      audit_detail += configs[i].name + ": eps_hat=" + fmt(res.epsilon_hat) +
                      " vs " + fmt(configs[i].epsilon) + "+" +
                      fmt(res.half_width) + "; ";
    }
  }
  report(3, "empirical audit within analytic epsilon across 12 configurations",
         audit_ok,
         audit_ok ? "12/12 within epsilon + MC half-width at 1e5 trials"
                  : audit_detail);
}

// --- criterion 4 ------------------------------------------------------------

void criterion4_regime_limits() {
  const std::vector<double> grid{1000.0, 10000.0, 100000.0};
  const int reps = 2000;
  bool all_ok = true;
  std::string detail;

  auto check = [&](const std::string& name, const ConvergenceResult& res) {
    const bool ok = res.final_distance < 0.05;
    all_ok = all_ok && ok;
    detail += name + "=" + fmt(res.final_distance) + " ";
  };

  BernoulliLaplacePopulation pop;
  pop.x = [](RngStream& s) { return s.uniform01(); };
  pop.mean_x = 0.5;

  RngStream s1(77001, 0);
  check("R1A(point)", simulate_bernoulli_laplace_convergence(
                          make_sequence(1, -0.5, 0), make_sequence(0.5, 0, 0),
                          pop, grid, reps, s1));
  RngStream s2(77002, 0);
  check("R2A(laplace)", simulate_bernoulli_laplace_convergence(
                            make_sequence(0.3, 0, 0), make_sequence(0.5, 0, 0),
                            pop, grid, reps, s2));
  RngStream s3(77003, 0);
  check("R2C(laplace)", simulate_bernoulli_laplace_convergence(
                            make_sequence(0.3, 0, 0), make_sequence(1, -1.5, 0),
                            pop, grid, reps, s3));
  RngStream s4(77004, 0);
  check("R3(bernoulli)", simulate_bernoulli_laplace_convergence(
                             make_sequence(1, 0.5, 0), make_sequence(0.5, 0, 0),
                             pop, grid, reps, s4));
  RngStream s5(77005, 0);
  check("R1B(poisson-mean)",
        simulate_bernoulli_laplace_convergence(make_sequence(1, -0.5, 0),
                                               make_sequence(3, -1, 0), pop,
                                               grid, reps, s5));
  RngStream s6(77006, 0);
  check("R2B(poisson+laplace)",
        simulate_bernoulli_laplace_convergence(make_sequence(0.3, 0, 0),
                                               make_sequence(3, -1, 0), pop,
                                               grid, reps, s6));

  TruncatedPopulation tpop;
  tpop.x = [](RngStream& s) { return 0.5 * s.uniform01(); };
  tpop.w = [](RngStream& s) { return 0.5 + 0.5 * s.uniform01(); };
  tpop.theta0 = 0.5 * std::log(2.0);
  RngStream s7(77007, 0);
  check("TWM-R3(point)", simulate_truncated_convergence(
                             make_sequence(1, 0, 0), make_sequence(1, -0.25, 0),
                             1.0, tpop, grid, reps, s7));

  report(4, "weak-limit Levy distance < 0.05 at N = 1e5, 2000 replications",
         all_ok, detail);
}

// --- criterion 5 ------------------------------------------------------------

void criterion5_identification_closed_forms() {
  bool norm_ok = true;
  double worst_norm = 0.0;
  for (int i = 1; i <= 20; ++i) {
    const double t = i / 21.0;
    const double mass =
        integrate([t](double th) { return posterior_density(t, th); }, 1e-12, t,
                  1e-12) +
        integrate([t](double th) { return posterior_density(t, th); }, t,
                  1.0 - 1e-12, 1e-12);
    worst_norm = std::max(worst_norm, std::fabs(mass - 1.0));
    norm_ok = norm_ok && std::fabs(mass - 1.0) < 1e-8;
  }
  report(5, "posterior normalization error < 1e-8 over 20 values of t",
         norm_ok, "worst " + fmt(worst_norm));

  bool mass_ok = true;
  double worst_mass = 0.0;
  for (double t : {0.3, 0.5, 0.62}) {
    for (double alpha : {0.05, 0.1}) {
      const CredibleRegion cr = credible_region(t, alpha);
      const double mass =
          integrate([t](double th) { return posterior_density(t, th); },
                    cr.z_numeric, t, 1e-13) +
          integrate([t](double th) { return posterior_density(t, th); }, t,
                    1.0 - cr.z_numeric, 1e-13);
      worst_mass = std::max(worst_mass, std::fabs(mass - (1.0 - alpha)));
      mass_ok = mass_ok && std::fabs(mass - (1.0 - alpha)) < 1e-8;
    }
  }
  report(5, "numerical credible region carries mass 1 - alpha within 1e-8",
         mass_ok, "worst " + fmt(worst_mass));

  // Containment: implementation versus the two-term closed form on a
  // 100-case grid.
  bool cont_ok = true;
  for (int ti = 1; ti <= 10; ++ti) {
    const double theta0 = ti / 11.0;
    const ExampleRandomSet set = make_example_set(theta0);
    for (int ki = 0; ki < 10; ++ki) {
      const double lo = ki % 2 == 0 ? 0.0 : ki * 0.05;
      const double hi = std::min(1.0, lo + 0.15 + 0.09 * ki);
      const double closed =
          (lo <= 0.0 && theta0 <= hi ? 0.5 : 0.0) +
          (lo <= theta0 && 1.0 <= hi ? 0.5 : 0.0);
      cont_ok = cont_ok && containment(set, IntervalSet{lo, hi}) == closed;
    }
  }
  report(5, "containment functional equals the two-term closed form exactly",
         cont_ok, "100-case (theta0, K) grid");

  bool decision_ok = true;
  for (int ti = 1; ti <= 20; ++ti) {
    const double theta0 = ti / 21.0;
    decision_ok = decision_ok &&
                  example_decision_f(IntervalSet{0.0, theta0}, 1e-6) == theta0;
    decision_ok = decision_ok &&
                  example_decision_f(IntervalSet{theta0, 1.0}, 1e-6) == theta0;
  }
  report(5, "curator decision rule recovers theta0 on every realization",
         decision_ok, "both realizations across a theta0 grid");

  // Uniform-selection histogram against the two-piece limit density.
  const double theta0 = 0.3;
  const ExampleRandomSet set = make_example_set(theta0);
  RngStream stream(55055, 0);
  const int draws = 100000;
  const int bins = 10;
  std::vector<int> counts(bins, 0);
  for (int i = 0; i < draws; ++i) {
    const double v = uniform_selection(sample_example_set(set, stream), stream);
    ++counts[std::min(bins - 1, static_cast<int>(v * bins))];
  }
  bool hist_ok = true;
  std::string hist_detail;
  for (int b = 0; b < bins; ++b) {
    const double lo = static_cast<double>(b) / bins;
    const double hi = lo + 1.0 / bins;
    const double p = integrate(
        [theta0](double t) { return uniform_selection_density(theta0, t); }, lo,
        hi, 1e-12);
    const double se = std::sqrt(p * (1.0 - p) / draws);
    const double gap = std::fabs(counts[b] / static_cast<double>(draws) - p);
    if (gap > 3.0 * se) {
      hist_ok = false;
      hist_detail += "bin " + std::to_string(b) + " off by " + fmt(gap) + "; ";
    }
  }
  report(5, "uniform-selection histogram matches the two-piece density",
         hist_ok, hist_ok ? "10 bins within 3 MC sd at 1e5 draws" : hist_detail);

  const CredibleRegion cr = credible_region(0.5, 0.05);
  std::printf(
      "      credible-region discrepancy report: t=0.5 alpha=0.05 "
      "z_closed_form=%.6f (mass %.4f) z_numeric=%.6f (mass %.10f); the closed "
      "form's exponent alpha corresponds to mass 1-2*alpha, the numeric root "
      "matches exponent alpha/2\n",
      cr.z_closed_form,
      integrate([](double th) { return posterior_density(0.5, th); },
                cr.z_closed_form, 0.5, 1e-12) +
          integrate([](double th) { return posterior_density(0.5, th); }, 0.5,
                    1.0 - cr.z_closed_form, 1e-12),
      cr.z_numeric, cr.mass_numeric);
  report(5, "credible-region discrepancy report emitted", true,
         "see line above");
}

// --- criterion 6 ------------------------------------------------------------

void criterion6_decision_fit() {
  const double r = 0.2;
  std::vector<double> grid;
  for (int k = 0; k < 50; ++k) grid.push_back(r + (1.0 - 2.0 * r) * k / 49.0);
  auto sampler = [r](double theta) { return IntervalSet{theta - r, theta + r}; };
  const DecisionDensityFit fit = fit_decision_density(grid, sampler, 4, true);

  double mae = 0.0;
  int held_out = 0;
  for (int i = 0; i < 41; ++i) {
    const double theta = r + (1.0 - 2.0 * r) * (i + 0.43) / 41.0;
    if (theta + r > 1.0 || theta - r < 0.0) continue;
    mae += std::fabs(predict_from_fit(fit, sampler(theta)) - theta);
    ++held_out;
  }
  mae /= held_out;
  double sup_err = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double z = r + (1.0 - 2.0 * r) * i / 400.0;
    sup_err = std::max(sup_err, std::fabs(fitted_density(fit, z) - 0.5));
  }
  report(6, "midpoint-family held-out MAE < 1e-5 (K=50, R=4)", mae < 1e-5,
         "mae " + fmt(mae));
  report(6, "fitted density within 1e-4 of 1/2 in sup norm", sup_err < 1e-4,
         "sup err " + fmt(sup_err));
  report(6, "normalization constraint residual < 1e-8",
         fit.constraint_residual < 1e-8, "residual " + fmt(fit.constraint_residual));
}

// --- criterion 7 ------------------------------------------------------------

void criterion7_estimator_properties() {
  const KernelSpec tri = make_kernel(KernelId::kTriangular);
  // Exactness on per-side affine data.
  std::vector<double> y, x;
  for (int i = 0; i < 12; ++i) {
    const double ul = -0.05 - 0.9 * i / 12.0;
    const double ur = 0.05 + 0.9 * i / 12.0;
    x.push_back(ul);
    y.push_back(0.2 - 1.3 * ul);
    x.push_back(ur);
    y.push_back(0.9 + 2.1 * ur);
  }
  const Dataset affine = Dataset::rdd(y, x);
  const RddFit fit = local_linear_sharp(affine, 0.0, tri, 1.0);
  double max_resid = 0.0;
  for (std::size_t i = 0; i < affine.size(); ++i) {
    const double xi = affine.x()[i];
    const double pred = xi >= 0.0 ? fit.right.intercept + fit.right.slope * xi
                                  : fit.left.intercept + fit.left.slope * xi;
    max_resid = std::max(max_resid, std::fabs(pred - affine.y()[i]));
  }
  report(7, "local linear exact on affine data (residuals < 1e-10)",
         max_resid < 1e-10, "max residual " + fmt(max_resid));

  // Shift/scale equivariance of the sharp estimators.
  RngStream stream(31337, 0);
  bool equi_ok = true;
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<double> ry, rx;
    for (int i = 0; i < 60; ++i) {
      rx.push_back(stream.uniform(-1.0, 1.0));
      ry.push_back(stream.uniform(0.0, 1.0) + (rx.back() >= 0.0 ? 0.3 : 0.0));
    }
    const Dataset d = Dataset::rdd(ry, rx);
    const double k = stream.uniform(-2.0, 2.0);
    const double s = stream.uniform(0.5, 2.5);
    const double a = stream.uniform(-0.7, 0.7);
    std::vector<double> y_aff, x_shift;
    for (double v : ry) y_aff.push_back(k + s * v);
    for (double v : rx) x_shift.push_back(v + a);
    const Dataset d_aff = Dataset::rdd(y_aff, rx);
    const Dataset d_shift = Dataset::rdd(ry, x_shift);
    for (int design = 0; design < 2; ++design) {
      auto tau = [&](const Dataset& data, double c) {
        return design == 0 ? nr_boundary_estimate(data, c, tri, 0.8).tau_hat
                           : local_linear_sharp(data, c, tri, 0.8).tau_hat;
      };
      const double base = tau(d, 0.0);
      equi_ok = equi_ok && std::fabs(tau(d_aff, 0.0) - s * base) < 1e-8;
      equi_ok = equi_ok && std::fabs(tau(d_shift, a) - base) < 1e-6;
    }
  }
  report(7, "sharp estimators shift-invariant and scale-equivariant", equi_ok,
         "25 random designs, both estimators");

  // Fuzzy equals sharp under perfect compliance.
  std::vector<double> fy, fx, fw;
  RngStream fstream(31338, 0);
  for (int i = 0; i < 80; ++i) {
    fx.push_back(fstream.uniform(-1.0, 1.0));
    fy.push_back(fstream.uniform(0.0, 1.0) + (fx.back() >= 0.0 ? 0.4 : 0.0));
    fw.push_back(fx.back() >= 0.0 ? 1.0 : 0.0);
  }
  const Dataset fuzzy_data = Dataset::rdd(fy, fx, fw);
  const KernelSpec uni = make_kernel(KernelId::kUniform);
  const double sharp_tau = local_linear_sharp(fuzzy_data, 0.0, uni, 1.0).tau_hat;
  const double fuzzy_tau = local_linear_fuzzy(fuzzy_data, 0.0, uni, 1.0).tau_hat;
  report(7, "fuzzy equals sharp under perfect compliance",
         std::fabs(sharp_tau - fuzzy_tau) < 1e-10,
         "gap " + fmt(std::fabs(sharp_tau - fuzzy_tau)));

  // Noise-free scenario 1 bias at N = 5000 over 500 replications.
  RngStream root(20260809, 0);
  double sum = 0.0;
  const int reps = 500;
  for (int r = 0; r < reps; ++r) {
    RngStream s = root.substream(static_cast<std::uint64_t>(r));
    const Dataset data = scenario1_dgp(5000, s);
    const double h = ik_bandwidth(data, 0.0, tri);
    sum += local_linear_sharp(data, 0.0, tri, h).tau_hat;
  }
  const double bias = sum / reps - kScenarioTau;
  report(7, "noise-free scenario 1 mean within 0.02 of tau = 0.30 at N = 5000",
         std::fabs(bias) < 0.02, "bias " + fmt(bias) + " over 500 replications");
}

// --- criterion 8 ------------------------------------------------------------

void criterion8_power_dichotomy() {
  // Scenario-1-style signal: tau = 0.30 with the sampling sd of the
  // local-linear estimate at N = 2000 as the known standard error.
  const KernelSpec tri = make_kernel(KernelId::kTriangular);
  RngStream root(90901, 0);
  std::vector<double> taus;
  for (int r = 0; r < 300; ++r) {
    RngStream s = root.substream(static_cast<std::uint64_t>(r));
    const Dataset data = scenario1_dgp(2000, s);
    const double h = ik_bandwidth(data, 0.0, tri);
    taus.push_back(local_linear_sharp(data, 0.0, tri, h).tau_hat);
  }
  const double se = sample_sd(taus);

  RngStream s0(90902, 0);
  const double power0 = dp_test_power(kScenarioTau, se, 0.0, 0.05, 4000, s0);
  RngStream s200(90903, 0);
  const double power200 =
      dp_test_power(kScenarioTau, se, 200.0, 0.05, 4000, s200);
  report(8, "variance 0 power >= 0.99", power0 >= 0.99,
         "power " + fmt(power0) + " (se " + fmt(se) + ")");
  report(8, "variance 200 power within [alpha - 0.02, alpha + 0.05]",
         power200 >= 0.03 && power200 <= 0.10,
         "power " + fmt(power200) + ": the test degenerates to its size");
}

// --- figures (qualitative) ---------------------------------------------------

void figures_qualitative() {
  ScenarioConfig config;
  config.master_seed = 515151;
  std::vector<double> spreads;
  for (double v : {0.0, 0.002, 2.0, 200.0}) {
    spreads.push_back(run_paths(config, v, 20, 300, 4000, 370).terminal_spread);
  }
  const bool ordered = spreads[0] < spreads[1] && spreads[1] < spreads[2] &&
                       spreads[2] < spreads[3];
  report(9, "terminal path spread ordered across the four variance panels",
         ordered,
         "spreads " + fmt(spreads[0]) + " < " + fmt(spreads[1]) + " < " +
             fmt(spreads[2]) + " < " + fmt(spreads[3]));
}

}  // namespace

int main() {
  std::printf("dpident acceptance suite\n");
  criterion1_table_bands();
  criterion2_sensitivity_oracle();
  criterion3_dp_accounting();
  criterion4_regime_limits();
  criterion5_identification_closed_forms();
  criterion6_decision_fit();
  criterion7_estimator_properties();
  criterion8_power_dichotomy();
  figures_qualitative();
  if (g_failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance check(s) failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
