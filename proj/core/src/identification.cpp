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
#include "dpident/identification.hpp"

#include <cmath>
#include <stdexcept>

#include "dpident/errors.hpp"
#include "dpident/stats.hpp"

namespace dpident {

IntervalSet make_interval_set(double lo, double hi, const ParamSpace& space) {
  if (!(space.lo <= lo && lo <= hi && hi <= space.hi)) {
    throw std::invalid_argument(
        "interval set must satisfy space.lo <= lo <= hi <= space.hi");
  }
  return IntervalSet{lo, hi};
}

ExampleRandomSet make_example_set(double theta0) {
  if (!(theta0 > 0.0 && theta0 < 1.0)) {
    throw std::invalid_argument("example set requires theta0 in (0,1)");
  }
  return ExampleRandomSet{theta0};
}

IntervalSet sample_example_set(const ExampleRandomSet& set, RngStream& stream) {
  return stream.uniform01() < 0.5 ? IntervalSet{0.0, set.theta0}
                                  : IntervalSet{set.theta0, 1.0};
}

double containment(const ExampleRandomSet& set, const IntervalSet& k) {
  double c = 0.0;
  if (k.lo <= 0.0 && set.theta0 <= k.hi) c += 0.5;
  if (k.lo <= set.theta0 && 1.0 <= k.hi) c += 0.5;
  return c;
}

double containment(std::span<const IntervalSet> realizations,
                   const IntervalSet& k) {
  if (realizations.empty()) {
    throw std::invalid_argument("containment needs at least one realization");
  }
  std::size_t inside = 0;
  for (const IntervalSet& r : realizations) {
    if (k.lo <= r.lo && r.hi <= k.hi) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(realizations.size());
}

double decision_map(const IntervalSet& realization,
                    const std::function<double(double)>& f, double xtol) {
  if (realization.hi - realization.lo <= xtol) {
    return 0.5 * (realization.lo + realization.hi);
  }
  return golden_section_min(f, realization.lo, realization.hi, xtol);
}

double example_decision_f(const IntervalSet& realization, double delta,
                          const ParamSpace& space) {
  const bool lo_at_boundary = std::fabs(realization.lo - space.lo) < delta;
  const bool hi_at_boundary = std::fabs(realization.hi - space.hi) < delta;
  if (lo_at_boundary == hi_at_boundary) {
    throw AmbiguousRealizationError(
        lo_at_boundary ? "both endpoints near the parameter-space boundary"
                       : "no endpoint near the parameter-space boundary");
  }
  return lo_at_boundary ? realization.hi : realization.lo;
}

double uniform_selection(const IntervalSet& realization, RngStream& stream) {
  if (!(realization.hi > realization.lo)) {
    throw std::invalid_argument("uniform_selection needs a nondegenerate set");
  }
  return stream.uniform(realization.lo, realization.hi);
}

double uniform_selection_density(double theta0, double t) {
  if (!(theta0 > 0.0 && theta0 < 1.0)) {
    throw std::invalid_argument("density requires theta0 in (0,1)");
  }
  if (t < 0.0 || t > 1.0) return 0.0;
  return t < theta0 ? 0.5 / theta0 : 0.5 / (1.0 - theta0);
}

double posterior_density(double t, double theta) {
  if (!(t > 0.0 && t < 1.0) || !(theta > 0.0 && theta < 1.0)) {
    throw std::invalid_argument("posterior_density requires interior t, theta");
  }
  const double c = -1.0 / std::log(t * (1.0 - t));
  return theta < t ? c / (1.0 - theta) : c / theta;
}

namespace {

// Exact posterior mass of [z, 1-z] around t: the two branches integrate in
// closed form, used as the bisection objective (quadrature double-checks it
// in the tests).
double region_mass(double t, double z) {
  const double c = -1.0 / std::log(t * (1.0 - t));
  return c * (2.0 * std::log(1.0 - z) - std::log(t * (1.0 - t)));
}

}  // namespace

CredibleRegion credible_region(double t, double alpha) {
  if (!(t > 0.0 && t < 1.0) || !(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("credible_region requires interior t, alpha");
  }
  auto g = [&](double z) { return region_mass(t, z) - (1.0 - alpha); };
  // mass(0) = 1 and mass decreases in z; when even the degenerate symmetric
  // form at z = 1/2 holds more than the requested mass, no region of the
  // form [z, 1-z] can carry exactly 1 - alpha.
  if (g(0.5 - 1e-12) >= 0.0) {
    throw FormInfeasibleError(
        "no symmetric-form region [z, 1-z] of the requested mass exists");
  }
  const double z = bisect(g, 0.0, 0.5 - 1e-12, 1e-14);
  if (!(z < t && t < 1.0 - z)) {
    throw FormInfeasibleError(
        "no symmetric-form region [z, 1-z] of the requested mass contains t");
  }
  CredibleRegion region;
  region.z_numeric = z;
  region.z_closed_form = 1.0 - std::pow(t * (1.0 - t), alpha);
  region.mass_numeric = region_mass(t, z);
  region.region = IntervalSet{z, 1.0 - z};
  return region;
}

double shifted_legendre(int r, double z) {
  if (r < 0) throw std::invalid_argument("shifted_legendre requires r >= 0");
  const double u = 2.0 * z - 1.0;
  double prev = 1.0;
  if (r == 0) return prev;
  double cur = u;
  for (int k = 1; k < r; ++k) {
    const double next =
        ((2.0 * k + 1.0) * u * cur - static_cast<double>(k) * prev) /
        (static_cast<double>(k) + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double fitted_density(const DecisionDensityFit& fit, double z) {
  double v = 0.0;
  for (std::size_t r = 0; r < fit.coefficients.size(); ++r) {
    v += fit.coefficients[r] * shifted_legendre(static_cast<int>(r), z);
  }
  return v;
}

namespace {

struct BoundaryFunctionals {
  std::vector<double> h;  // H_r for one realization
  std::vector<double> q;  // Q_r
};

BoundaryFunctionals boundary_functionals(const IntervalSet& set, int r_max,
                                         bool signed_flux) {
  BoundaryFunctionals out;
  out.h.resize(static_cast<std::size_t>(r_max) + 1);
  out.q.resize(static_cast<std::size_t>(r_max) + 1);
  for (int r = 0; r <= r_max; ++r) {
    const double ha = set.lo * shifted_legendre(r, set.lo);
    const double hb = set.hi * shifted_legendre(r, set.hi);
    const double qa = shifted_legendre(r, set.lo);
    const double qb = shifted_legendre(r, set.hi);
    out.h[static_cast<std::size_t>(r)] = signed_flux ? hb - ha : ha + hb;
    out.q[static_cast<std::size_t>(r)] = signed_flux ? qb - qa : qa + qb;
  }
  return out;
}

}  // namespace

DecisionDensityFit fit_decision_density(
    const std::vector<double>& theta_grid,
    const std::function<IntervalSet(double)>& realization_sampler, int r_max,
    bool constraint, bool signed_flux) {
  const int k_pts = static_cast<int>(theta_grid.size());
  if (r_max < 0 || k_pts < r_max + 2) {
    throw std::invalid_argument(
        "fit_decision_density requires K >= R + 2 grid points");
  }
  const std::size_t p = static_cast<std::size_t>(r_max) + 1;
  std::vector<std::vector<double>> h_rows;
  std::vector<double> q_bar(p, 0.0);
  h_rows.reserve(static_cast<std::size_t>(k_pts));
  for (double theta : theta_grid) {
    const BoundaryFunctionals bf =
        boundary_functionals(realization_sampler(theta), r_max, signed_flux);
    h_rows.push_back(bf.h);
    for (std::size_t r = 0; r < p; ++r) q_bar[r] += bf.q[r];
  }
  for (std::size_t r = 0; r < p; ++r) q_bar[r] /= static_cast<double>(k_pts);

  // Normal equations, bordered by the normalization constraint when active.
  std::vector<double> hth(p * p, 0.0);
  std::vector<double> hty(p, 0.0);
  for (int k = 0; k < k_pts; ++k) {
    const auto& row = h_rows[static_cast<std::size_t>(k)];
    for (std::size_t a = 0; a < p; ++a) {
      hty[a] += row[a] * theta_grid[static_cast<std::size_t>(k)];
      for (std::size_t b = 0; b < p; ++b) hth[a * p + b] += row[a] * row[b];
    }
  }

  std::vector<double> solution;
  if (constraint) {
    const std::size_t m = p + 1;
    std::vector<double> kkt(m * m, 0.0);
    std::vector<double> rhs(m, 0.0);
    for (std::size_t a = 0; a < p; ++a) {
      rhs[a] = 2.0 * hty[a];
      kkt[a * m + p] = q_bar[a];
      kkt[p * m + a] = q_bar[a];
      for (std::size_t b = 0; b < p; ++b) kkt[a * m + b] = 2.0 * hth[a * p + b];
    }
    rhs[p] = 1.0;
    if (!solve_dense(kkt, rhs, m, &solution)) {
      throw RankDeficientError("constrained normal system is singular");
    }
    solution.resize(p);
  } else {
    if (!solve_dense(hth, hty, p, &solution)) {
      throw RankDeficientError("normal system is singular");
    }
  }

  DecisionDensityFit fit;
  fit.coefficients = solution;
  fit.grid_size = k_pts;
  fit.constrained = constraint;
  fit.signed_flux = signed_flux;
  double rss = 0.0;
  for (int k = 0; k < k_pts; ++k) {
    double pred = 0.0;
    const auto& row = h_rows[static_cast<std::size_t>(k)];
    for (std::size_t r = 0; r < p; ++r) pred += solution[r] * row[r];
    const double e = theta_grid[static_cast<std::size_t>(k)] - pred;
    rss += e * e;
  }
  fit.residual_norm = std::sqrt(rss);
  double qsum = 0.0;
  for (std::size_t r = 0; r < p; ++r) qsum += solution[r] * q_bar[r];
  fit.constraint_residual = std::fabs(qsum - 1.0);
  return fit;
}

double predict_from_fit(const DecisionDensityFit& fit,
                        const IntervalSet& realization) {
  const BoundaryFunctionals bf = boundary_functionals(
      realization, static_cast<int>(fit.coefficients.size()) - 1,
      fit.signed_flux);
  double s = 0.0;
  for (std::size_t r = 0; r < fit.coefficients.size(); ++r) {
    s += fit.coefficients[r] * bf.h[r];
  }
  return std::min(realization.hi, std::max(realization.lo, s));
}

ConsistencyResult decision_consistency_experiment(
    double theta0, const std::vector<double>& n_grid, int replications,
    SetSelector selector, RngStream& stream, double delta) {
  if (!(theta0 > 0.0 && theta0 < 1.0) || n_grid.empty() || replications < 1) {
    throw std::invalid_argument("consistency experiment: invalid parameters");
  }
  const ParamSpace unit{0.0, 1.0};
  ConsistencyResult result;
  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const double n = n_grid[gi];
    RngStream grid_stream = stream.substream(gi);
    double abs_err = 0.0;
    int used = 0;
    for (int r = 0; r < replications; ++r) {
      RngStream rs = grid_stream.substream(static_cast<std::uint64_t>(r));
      const double theta_hat =
          project(theta0 + rs.normal(0.0, 1.0) / std::sqrt(n), unit);
      const IntervalSet realization = rs.uniform01() < 0.5
                                          ? IntervalSet{0.0, theta_hat}
                                          : IntervalSet{theta_hat, 1.0};
      double selected;
      if (selector == SetSelector::kExampleDecision) {
        try {
          selected = example_decision_f(realization, delta, unit);
        } catch (const AmbiguousRealizationError&) {
          ++result.ambiguous_skips;
          continue;
        }
      } else {
        selected = uniform_selection(realization, rs);
      }
      abs_err += std::fabs(selected - theta0);
      ++used;
    }
    const double mae = used > 0 ? abs_err / used : kInf;
    result.points.push_back({n, mae});
    if (gi + 1 == n_grid.size()) result.final_mae = mae;
  }
  return result;
}

}  // namespace dpident
