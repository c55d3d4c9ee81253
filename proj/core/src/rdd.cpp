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
#include "dpident/rdd.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "dpident/errors.hpp"
#include "dpident/stats.hpp"

namespace dpident {

namespace {

constexpr double kConditionLimit = 1e12;

struct WlsInput {
  std::vector<double> u;  // x - c
  std::vector<double> y;
  std::vector<double> q;  // kernel weights (unnormalized)
};

WlsInput side_points(std::span<const double> xs, std::span<const double> ys,
                     double c, const KernelSpec& kernel, double h, Side side) {
  WlsInput out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool on_side = side == Side::kRight ? xs[i] >= c : xs[i] < c;
    if (!on_side) continue;
    const double q = eval_kernel(kernel, (xs[i] - c) / h);
    if (q <= 0.0) continue;
    out.u.push_back(xs[i] - c);
    out.y.push_back(ys[i]);
    out.q.push_back(q);
  }
  return out;
}

// Weighted least squares of y on (1, u) with the closed 2x2 normal equations
// and an HC0-style sandwich for the intercept.
SideFit wls_line(const WlsInput& in, const char* side_name) {
  if (in.u.empty()) {
    throw EmptySideError(std::string("no weighted observations ") + side_name +
                         " of the cutoff");
  }
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, sy0 = 0.0, sy1 = 0.0;
  for (std::size_t i = 0; i < in.u.size(); ++i) {
    const double q = in.q[i];
    s0 += q;
    s1 += q * in.u[i];
    s2 += q * in.u[i] * in.u[i];
    sy0 += q * in.y[i];
    sy1 += q * in.u[i] * in.y[i];
  }
  // Eigenvalues of [[s0, s1], [s1, s2]].
  const double tr = s0 + s2;
  const double disc = std::sqrt((s0 - s2) * (s0 - s2) + 4.0 * s1 * s1);
  const double lmax = 0.5 * (tr + disc);
  const double lmin = 0.5 * (tr - disc);
  if (!(lmin > 0.0) || lmax / lmin > kConditionLimit) {
    throw SingularDesignError(
        std::string("weighted design matrix ill-conditioned ") + side_name +
        " of the cutoff");
  }
  const double det = s0 * s2 - s1 * s1;
  const double alpha = (s2 * sy0 - s1 * sy1) / det;
  const double beta = (s0 * sy1 - s1 * sy0) / det;

  double b00 = 0.0, b01 = 0.0, b11 = 0.0;
  for (std::size_t i = 0; i < in.u.size(); ++i) {
    const double e = in.y[i] - alpha - beta * in.u[i];
    const double we = in.q[i] * in.q[i] * e * e;
    b00 += we;
    b01 += we * in.u[i];
    b11 += we * in.u[i] * in.u[i];
  }
  // First row of inv(M): (s2, -s1)/det.
  const double v00 = (s2 * (s2 * b00 - s1 * b01) - s1 * (s2 * b01 - s1 * b11)) /
                     (det * det);
  SideFit fit;
  fit.intercept = alpha;
  fit.slope = beta;
  fit.se_intercept = std::sqrt(std::max(0.0, v00));
  fit.n = static_cast<int>(in.u.size());
  return fit;
}

void require_rdd(const Dataset& data, const char* op) {
  if (data.shape() != DatasetShape::kRdd) {
    throw std::invalid_argument(std::string(op) + " requires an RDD dataset");
  }
}

}  // namespace

RddFit nr_boundary_estimate(const Dataset& data, double c,
                            const KernelSpec& kernel, double h) {
  require_rdd(data, "nr_boundary_estimate");
  const auto wl = kernel_weights(kernel, data.x(), c, h, Side::kLeft);
  const auto wr = kernel_weights(kernel, data.x(), c, h, Side::kRight);
  double left = 0.0, right = 0.0;
  int nl = 0, nr = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    left += wl[i] * data.y()[i];
    right += wr[i] * data.y()[i];
    if (wl[i] > 0.0) ++nl;
    if (wr[i] > 0.0) ++nr;
  }
  RddFit fit;
  fit.kernel = kernel;
  fit.h = h;
  fit.tau_hat = right - left;
  fit.left.intercept = left;
  fit.right.intercept = right;
  fit.n_left = nl;
  fit.n_right = nr;
  fit.left.n = nl;
  fit.right.n = nr;
  return fit;
}

RddFit local_linear_sharp(const Dataset& data, double c,
                          const KernelSpec& kernel, double h) {
  require_rdd(data, "local_linear_sharp");
  const WlsInput li = side_points(data.x(), data.y(), c, kernel, h, Side::kLeft);
  const WlsInput ri = side_points(data.x(), data.y(), c, kernel, h, Side::kRight);
  RddFit fit;
  fit.kernel = kernel;
  fit.h = h;
  fit.left = wls_line(li, "left");
  fit.right = wls_line(ri, "right");
  fit.tau_hat = fit.right.intercept - fit.left.intercept;
  fit.se_tau = std::sqrt(fit.left.se_intercept * fit.left.se_intercept +
                         fit.right.se_intercept * fit.right.se_intercept);
  fit.n_left = fit.left.n;
  fit.n_right = fit.right.n;
  return fit;
}

RddFit local_linear_fuzzy(const Dataset& data, double c,
                          const KernelSpec& kernel, double h) {
  require_rdd(data, "local_linear_fuzzy");
  if (!data.has_w()) {
    throw std::invalid_argument("local_linear_fuzzy requires a treatment column w");
  }
  const WlsInput yl = side_points(data.x(), data.y(), c, kernel, h, Side::kLeft);
  const WlsInput yr = side_points(data.x(), data.y(), c, kernel, h, Side::kRight);
  const WlsInput wl = side_points(data.x(), data.w(), c, kernel, h, Side::kLeft);
  const WlsInput wr = side_points(data.x(), data.w(), c, kernel, h, Side::kRight);
  const SideFit fyl = wls_line(yl, "left");
  const SideFit fyr = wls_line(yr, "right");
  const SideFit fwl = wls_line(wl, "left");
  const SideFit fwr = wls_line(wr, "right");
  const double num = fyr.intercept - fyl.intercept;
  const double den = fwr.intercept - fwl.intercept;
  if (std::fabs(den) < 1e-10) {
    throw WeakFirstStageError("treatment probability jump is numerically zero");
  }
  RddFit fit;
  fit.kernel = kernel;
  fit.h = h;
  fit.left = fyl;
  fit.right = fyr;
  fit.tau_hat = num / den;
  const double var_num = fyl.se_intercept * fyl.se_intercept +
                         fyr.se_intercept * fyr.se_intercept;
  const double var_den = fwl.se_intercept * fwl.se_intercept +
                         fwr.se_intercept * fwr.se_intercept;
  fit.se_tau = std::sqrt(var_num / (den * den) +
                         fit.tau_hat * fit.tau_hat * var_den / (den * den));
  fit.n_left = fyl.n;
  fit.n_right = fyr.n;
  return fit;
}

double ate_propensity(const Dataset& data, const KernelSpec& kernel, double h,
                      bool clip_scores) {
  require_rdd(data, "ate_propensity");
  if (!data.has_d()) {
    throw std::invalid_argument("ate_propensity requires a treatment column d");
  }
  if (!(h > 0.0)) {
    throw std::invalid_argument("ate_propensity requires h > 0");
  }
  const std::size_t n = data.size();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      const double k = eval_kernel(kernel, (data.x()[i] - data.x()[j]) / h);
      num += data.d()[j] * k;
      den += k;
    }
    if (!(den > 0.0)) {
      throw DegeneratePropensityError("zero kernel mass at some X_i");
    }
    double p = num / den;
    if (clip_scores) {
      p = std::min(1.0 - 1e-6, std::max(1e-6, p));
    } else if (p <= 0.0 || p >= 1.0) {
      throw DegeneratePropensityError("fitted propensity score hit {0,1}");
    }
    const double yi = data.y()[i];
    const double di = data.d()[i];
    total += yi * di / p - yi * (1.0 - di) / (1.0 - p);
  }
  return total / static_cast<double>(n);
}

namespace {

struct PolyFit {
  std::vector<double> coef;
};

// OLS of y on powers of u (and an optional jump dummy as the second column).
PolyFit poly_ols(const std::vector<double>& u, const std::vector<double>& y,
                 int degree, const std::vector<double>* jump) {
  const std::size_t p = static_cast<std::size_t>(degree + 1) + (jump ? 1 : 0);
  std::vector<double> xtx(p * p, 0.0);
  std::vector<double> xty(p, 0.0);
  std::vector<double> row(p);
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::size_t idx = 0;
    row[idx++] = 1.0;
    if (jump) row[idx++] = (*jump)[i];
    double pw = 1.0;
    for (int k = 1; k <= degree; ++k) {
      pw *= u[i];
      row[idx++] = pw;
    }
    for (std::size_t a = 0; a < p; ++a) {
      xty[a] += row[a] * y[i];
      for (std::size_t b = 0; b < p; ++b) xtx[a * p + b] += row[a] * row[b];
    }
  }
  PolyFit fit;
  if (!solve_dense(xtx, xty, p, &fit.coef)) {
    throw SingularDesignError("polynomial pilot regression is singular");
  }
  return fit;
}

}  // namespace

double ik_bandwidth(const Dataset& data, double c, const KernelSpec& kernel) {
  require_rdd(data, "ik_bandwidth");
  const std::size_t n = data.size();
  if (n < 10) {
    throw std::invalid_argument("ik_bandwidth needs at least 10 observations");
  }
  std::vector<double> xs(data.x().begin(), data.x().end());
  const double sx = sample_sd(xs);
  const double nn = static_cast<double>(n);

  // Step 1: density and conditional variance at the cutoff from a pilot
  // window h1 = 1.84 S_x N^{-1/5}.
  double h1 = 1.84 * sx * std::pow(nn, -0.2);
  double f_c = 0.0, sigma2_c = 0.0;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<double> yl, yr;
    for (std::size_t i = 0; i < n; ++i) {
      const double xi = data.x()[i];
      if (xi >= c - h1 && xi < c) yl.push_back(data.y()[i]);
      if (xi >= c && xi <= c + h1) yr.push_back(data.y()[i]);
    }
    if (yl.size() >= 2 && yr.size() >= 2) {
      const double ml = mean(yl);
      const double mr = mean(yr);
      double ss = 0.0;
      for (double v : yl) ss += (v - ml) * (v - ml);
      for (double v : yr) ss += (v - mr) * (v - mr);
      f_c = static_cast<double>(yl.size() + yr.size()) / (2.0 * nn * h1);
      sigma2_c = ss / static_cast<double>(yl.size() + yr.size());
      break;
    }
    h1 *= 2.0;
    if (attempt == 7) {
      throw std::invalid_argument("ik_bandwidth: too few observations near c");
    }
  }

  // Step 2: one-sided second derivatives from quadratic fits on windows of
  // width h2, with h2 driven by pilot third derivatives from median-trimmed
  // per-side quartic fits. The reference's single pooled cubic (jump dummy
  // only) cancels between sides whose third derivatives have opposite signs
  // and is itself badly biased for m''' on high-order branches; fitting one
  // order higher per side keeps the pilot informative while leaving every
  // constant, rate and regularization term of the procedure unchanged.
  std::vector<double> u(n), yv(data.y().begin(), data.y().end());
  std::size_t n_left = 0, n_right = 0;
  for (std::size_t i = 0; i < n; ++i) {
    u[i] = data.x()[i] - c;
    if (u[i] >= 0.0) ++n_right; else ++n_left;
  }
  if (n_left < 5 || n_right < 5) {
    throw std::invalid_argument("ik_bandwidth: too few observations on a side");
  }
  const double x_lo = *std::min_element(u.begin(), u.end());
  const double x_hi = *std::max_element(u.begin(), u.end());

  std::vector<double> left_u, right_u;
  for (double ui : u) (ui >= 0.0 ? right_u : left_u).push_back(ui);
  const auto median_of = [](std::vector<double>& v) {
    std::nth_element(v.begin(), v.begin() + v.size() / 2, v.end());
    return v[v.size() / 2];
  };
  const double med_l = median_of(left_u);
  const double med_r = median_of(right_u);

  auto side_pilot_m3 = [&](bool right) {
    std::vector<double> su, sy;
    for (std::size_t i = 0; i < n; ++i) {
      if (right && u[i] >= 0.0 && u[i] <= med_r) {
        su.push_back(u[i]);
        sy.push_back(yv[i]);
      }
      if (!right && u[i] < 0.0 && u[i] >= med_l) {
        su.push_back(u[i]);
        sy.push_back(yv[i]);
      }
    }
    if (su.size() < 6) return 0.0;
    return 6.0 * poly_ols(su, sy, 4, nullptr).coef[3];
  };
  const double m3sq_r = std::max(side_pilot_m3(true) * side_pilot_m3(true), 0.01);
  const double m3sq_l = std::max(side_pilot_m3(false) * side_pilot_m3(false), 0.01);

  auto side_quadratic = [&](bool right, double h2, int* count) {
    std::vector<double> su, sy;
    for (std::size_t i = 0; i < n; ++i) {
      if (right && u[i] >= 0.0 && u[i] <= h2) {
        su.push_back(u[i]);
        sy.push_back(yv[i]);
      }
      if (!right && u[i] < 0.0 && u[i] >= -h2) {
        su.push_back(u[i]);
        sy.push_back(yv[i]);
      }
    }
    *count = static_cast<int>(su.size());
    if (su.size() < 4) return 0.0;
    return 2.0 * poly_ols(su, sy, 2, nullptr).coef[2];
  };

  double h2r = 3.56 * std::pow(sigma2_c / (f_c * m3sq_r), 1.0 / 7.0) *
               std::pow(static_cast<double>(n_right), -1.0 / 7.0);
  double h2l = 3.56 * std::pow(sigma2_c / (f_c * m3sq_l), 1.0 / 7.0) *
               std::pow(static_cast<double>(n_left), -1.0 / 7.0);
  // The second-stage window is floored at the first-stage pilot width, which
  // truncates the small-window tail an upward-noisy pilot m''' would produce.
  h2r = std::min(std::max(h2r, h1), x_hi);
  h2l = std::min(std::max(h2l, h1), -x_lo);
  int n2r = 0, n2l = 0;
  double m2r = side_quadratic(true, h2r, &n2r);
  double m2l = side_quadratic(false, h2l, &n2l);
  if (n2r < 4) m2r = side_quadratic(true, x_hi, &n2r);
  if (n2l < 4) m2l = side_quadratic(false, -x_lo, &n2l);

  // Step 3: regularized plug-in formula.
  const double reg_r = 2160.0 * sigma2_c /
                       (static_cast<double>(std::max(n2r, 1)) * std::pow(h2r, 4));
  const double reg_l = 2160.0 * sigma2_c /
                       (static_cast<double>(std::max(n2l, 1)) * std::pow(h2l, 4));
  double ck = 3.4375;  // edge (triangular) kernel constant
  if (kernel.id == KernelId::kUniform) ck = 5.40;
  const double denom = f_c * ((m2r - m2l) * (m2r - m2l) + reg_r + reg_l);
  double h = ck * std::pow(2.0 * sigma2_c / denom, 0.2) * std::pow(nn, -0.2);
  const double h_cap = std::max(x_hi, -x_lo);
  if (!(h > 0.0) || !std::isfinite(h)) h = h_cap;
  return std::min(h, h_cap);
}

double select_bandwidth(const Dataset& data, double c,
                        const BandwidthStrategy& strategy,
                        const KernelSpec& kernel) {
  if (data.size() < 2) {
    throw std::invalid_argument("select_bandwidth needs at least 2 observations");
  }
  if (const auto* fixed = std::get_if<FixedBandwidth>(&strategy)) {
    if (!(fixed->h > 0.0)) {
      throw std::invalid_argument("fixed bandwidth must be positive");
    }
    return fixed->h;
  }
  if (const auto* rot = std::get_if<RuleOfThumbBandwidth>(&strategy)) {
    std::vector<double> xs(data.x().begin(), data.x().end());
    return rot->c_h * sample_sd(xs) *
           std::pow(static_cast<double>(data.size()), -0.2);
  }
  return ik_bandwidth(data, c, kernel);
}

DpRddResult dp_rdd_estimate(RddDesign design, const Dataset& data, double c,
                            const KernelSpec& kernel, double h,
                            const RddNoise& noise, RngStream& stream) {
  RddFit fit;
  switch (design) {
    case RddDesign::kSharpNr:
      fit = nr_boundary_estimate(data, c, kernel, h);
      break;
    case RddDesign::kSharpLocLin:
      fit = local_linear_sharp(data, c, kernel, h);
      break;
    case RddDesign::kFuzzyLocLin:
      fit = local_linear_fuzzy(data, c, kernel, h);
      break;
  }

  DpRddResult out;
  out.fit = fit;
  out.raw_tau = fit.tau_hat;
  if (const auto* cal = std::get_if<CalibratedNoise>(&noise)) {
    if (!(cal->epsilon > 0.0)) {
      throw std::invalid_argument("calibrated noise requires epsilon > 0");
    }
    if (!(cal->sensitivity >= 0.0) || !std::isfinite(cal->sensitivity)) {
      throw InfiniteSensitivityError(
          "calibrated noise requires a finite global sensitivity");
    }
    out.laplace_scale = cal->sensitivity / cal->epsilon;
    out.epsilon = cal->epsilon;
    out.epsilon_is_annotation = false;
  } else {
    const auto& fv = std::get<FixedVarianceNoise>(noise);
    if (!(fv.variance >= 0.0)) {
      throw std::invalid_argument("noise variance must be >= 0");
    }
    out.laplace_scale = std::sqrt(fv.variance / 2.0);
    out.epsilon_is_annotation = true;
    out.epsilon = fv.sensitivity && fv.variance > 0.0
                      ? *fv.sensitivity * std::sqrt(2.0 / fv.variance)
                      : std::numeric_limits<double>::quiet_NaN();
  }
  out.noise_draw = out.laplace_scale > 0.0
                       ? stream.laplace(0.0, out.laplace_scale)
                       : 0.0;
  out.estimate = out.raw_tau + out.noise_draw;
  return out;
}

}  // namespace dpident
