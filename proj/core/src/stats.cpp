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
#include "dpident/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace dpident {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrtPi = 0.5723649429247001;  // log(sqrt(pi))
}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double log_normal_cdf(double x) {
  // erfc stays accurate until it underflows near x = -37.5; switch to the
  // asymptotic expansion just before that.
  if (x > -34.0) {
    return std::log(normal_cdf(x));
  }
  const double v = -x / kSqrt2;
  const double v2 = v * v;
  const double series = std::log1p(
      -0.5 / v2 + 0.75 / (v2 * v2) - 1.875 / (v2 * v2 * v2) +
      6.5625 / (v2 * v2 * v2 * v2) - 29.53125 / (v2 * v2 * v2 * v2 * v2));
  return -v2 - std::log(2.0 * v) - kLogSqrtPi + series;
}

double normal_quantile(double p) {
  // Wichura (1988), algorithm AS 241, routine PPND16.
  if (!(p > 0.0 && p < 1.0)) {
    throw std::invalid_argument("normal_quantile: p must be in (0,1)");
  }
  const double q = p - 0.5;
  double r;
  if (std::fabs(q) <= 0.425) {
    r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) *
                    r +
                4.5921953931549871457e+4) *
                   r +
               1.3731693765509461125e+4) *
                  r +
              1.9715909503065514427e+3) *
                 r +
             1.3314166789178437745e+2) *
                r +
            3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) *
                    r +
                2.1213794301586595867e+4) *
                   r +
               5.3941960214247511077e+3) *
                  r +
              6.8718700749205790830e+2) *
                 r +
             4.2313330701600911252e+1) *
                r +
            1.0);
  }
  r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                2.41780725177450611770e-1) *
                   r +
               1.27045825245236838258e+0) *
                  r +
              3.64784832476320460504e+0) *
                 r +
             5.76949722146069140550e+0) *
                r +
            4.63033784615654529590e+0) *
               r +
           1.42343711074968357734e+0) /
          (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                1.51986665636164571966e-2) *
                   r +
               1.48103976427480074590e-1) *
                  r +
              6.89767334985100004550e-1) *
                 r +
             1.67638483018380384940e+0) *
                r +
            2.05319162663775882187e+0) *
               r +
           1.0);
  } else {
    r -= 5.0;
    val = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                1.24266094738807843860e-3) *
                   r +
               2.65321895265761230930e-2) *
                  r +
              2.96560571828504891230e-1) *
                 r +
             1.78482653991729133580e+0) *
                r +
            5.46378491116411436990e+0) *
               r +
           6.65790464350110377720e+0) /
          (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) *
                    r +
                1.84631831751005468180e-5) *
                   r +
               7.86869131145613259100e-4) *
                  r +
              1.48753612908506148525e-2) *
                 r +
             1.36929880922735805310e-1) *
                r +
            5.99832206555887937690e-1) *
               r +
           1.0);
  }
  return q < 0.0 ? -val : val;
}

double laplace_cdf(double x, double location, double scale) {
  const double z = (x - location) / scale;
  return z < 0.0 ? 0.5 * std::exp(z) : 1.0 - 0.5 * std::exp(-z);
}

double normal_laplace_cdf(double s, double sigma, double b) {
  if (sigma < 0.0 || b < 0.0) {
    throw std::invalid_argument("normal_laplace_cdf: negative scale");
  }
  if (b == 0.0) return sigma == 0.0 ? (s >= 0.0 ? 1.0 : 0.0)
                                    : normal_cdf(s / sigma);
  if (sigma == 0.0) return laplace_cdf(s, 0.0, b);
  // P(sigma Z + L <= s) = Phi(s/sigma)
  //   - (1/2) e^{sigma^2/(2b^2)} [ e^{-s/b} Phi(s/sigma - sigma/b)
  //                              - e^{ s/b} Phi(-s/sigma - sigma/b) ];
  // both products are assembled in log space, since the leading exponential
  // overflows long before the products do.
  const double r = sigma / b;
  const double z = s / sigma;
  const double lead = 0.5 * r * r;
  const double t1 = std::exp(lead - s / b + log_normal_cdf(z - r));
  const double t2 = std::exp(lead + s / b + log_normal_cdf(-z - r));
  const double val = normal_cdf(z) - 0.5 * (t1 - t2);
  return std::min(1.0, std::max(0.0, val));
}

double normal_laplace_two_sided_critical(double sigma, double b, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("critical value: alpha must be in (0,1)");
  }
  if (sigma == 0.0 && b == 0.0) return 0.0;
  if (b == 0.0) return sigma * normal_quantile(1.0 - alpha / 2.0);
  if (sigma == 0.0) return b * std::log(1.0 / alpha);
  // P(|S| > u_1 + u_2) <= P(|sigma Z| > u_1) + P(|L| > u_2): picking each
  // piece at level alpha/2 gives a guaranteed bracket.
  const double hi = sigma * normal_quantile(1.0 - alpha / 4.0) +
                    b * std::log(2.0 / alpha) + 1.0;
  auto g = [&](double c) {
    return normal_laplace_cdf(c, sigma, b) - (1.0 - alpha / 2.0);
  };
  return bisect(g, 0.0, hi, 1e-12 * (sigma + b));
}

namespace {

double simpson(const std::function<double(double)>& f, double a, double fa,
               double b, double fb, double fm, double whole, double tol,
               int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson(f, a, fa, m, fm, flm, left, tol / 2.0, depth - 1) +
         simpson(f, m, fm, b, fb, frm, right, tol / 2.0, depth - 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson(f, a, fa, b, fb, fm, whole, tol, 60);
}

double bisect(const std::function<double(double)>& f, double lo, double hi,
              double xtol) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0.0) == (fhi > 0.0)) {
    throw std::invalid_argument("bisect: interval does not bracket a root");
  }
  for (int i = 0; i < 200 && hi - lo > xtol; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = f(mid);
    if (fmid == 0.0) return mid;
    if ((fmid > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double golden_section_min(const std::function<double(double)>& f, double lo,
                          double hi, double xtol) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo;
  double b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > xtol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / static_cast<double>(v.size());
}

double sample_sd(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

double kolmogorov_distance(std::vector<double> sample, const ReferenceCdf& ref) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double fx = ref.cdf(sample[i]);
    d = std::max(d, std::fabs((static_cast<double>(i) + 1.0) / n - fx));
    d = std::max(d, std::fabs(static_cast<double>(i) / n - fx));
  }
  for (double a : ref.atoms) {
    const auto lo = std::lower_bound(sample.begin(), sample.end(), a);
    const double fhat_left =
        static_cast<double>(lo - sample.begin()) / n;
    const double f_left = ref.cdf(std::nextafter(a, -1e308));
    d = std::max(d, std::fabs(fhat_left - f_left));
  }
  return d;
}

namespace {

// Checks the Levy sandwich F(t-h)-h <= Fhat(t) <= F(t+h)+h at the jump points
// of the empirical CDF and at the reference atoms (shifted by +-h), which is
// where the extremes of a step-vs-monotone comparison live.
bool levy_feasible(const std::vector<double>& sorted, const ReferenceCdf& ref,
                   double h) {
  const double n = static_cast<double>(sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double t = sorted[i];
    const double fhat_right = (static_cast<double>(i) + 1.0) / n;
    const double fhat_left = static_cast<double>(i) / n;
    if (fhat_right > ref.cdf(t + h) + h + 1e-12) return false;
    if (fhat_left < ref.cdf(std::nextafter(t - h, -1e308)) - h - 1e-12) {
      return false;
    }
  }
  for (double a : ref.atoms) {
    for (double t : {a + h, a - h, a}) {
      const auto up = std::upper_bound(sorted.begin(), sorted.end(), t);
      const double fhat = static_cast<double>(up - sorted.begin()) / n;
      const auto lo = std::lower_bound(sorted.begin(), sorted.end(), t);
      const double fhat_left = static_cast<double>(lo - sorted.begin()) / n;
      if (fhat > ref.cdf(t + h) + h + 1e-12) return false;
      if (fhat_left < ref.cdf(std::nextafter(t - h, -1e308)) - h - 1e-12) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

double levy_distance(std::vector<double> sample, const ReferenceCdf& ref) {
  std::sort(sample.begin(), sample.end());
  double lo = 0.0;
  double hi = 1.0;
  if (levy_feasible(sample, ref, 1e-9)) return 0.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (levy_feasible(sample, ref, mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

double levy_distance_two_sample(std::vector<double> a, std::vector<double> b) {
  std::sort(b.begin(), b.end());
  const double m = static_cast<double>(b.size());
  ReferenceCdf ref;
  ref.cdf = [b = std::move(b), m](double t) {
    const auto up = std::upper_bound(b.begin(), b.end(), t);
    return static_cast<double>(up - b.begin()) / m;
  };
  return levy_distance(std::move(a), ref);
}

bool solve_dense(std::vector<double> a, std::vector<double> b, std::size_t n,
                 std::vector<double>* x, double pivot_tol) {
  if (a.size() != n * n || b.size() != n) {
    throw std::invalid_argument("solve_dense: dimension mismatch");
  }
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::fabs(a[r * n + col]) > std::fabs(a[piv * n + col])) piv = r;
    }
    if (std::fabs(a[piv * n + col]) < pivot_tol) return false;
    if (piv != col) {
      for (std::size_t k = 0; k < n; ++k) std::swap(a[piv * n + k], a[col * n + k]);
      std::swap(b[piv], b[col]);
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double factor = a[r * n + col] / a[col * n + col];
      if (factor == 0.0) continue;
      for (std::size_t k = col; k < n; ++k) a[r * n + k] -= factor * a[col * n + k];
      b[r] -= factor * b[col];
    }
  }
  x->assign(n, 0.0);
  for (std::size_t ri = n; ri-- > 0;) {
    double s = b[ri];
    for (std::size_t k = ri + 1; k < n; ++k) s -= a[ri * n + k] * (*x)[k];
    (*x)[ri] = s / a[ri * n + ri];
  }
  return true;
}

}  // namespace dpident
