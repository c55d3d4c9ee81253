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
#include "dpident/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dpident/errors.hpp"
#include "dpident/io.hpp"
#include "dpident/parallel.hpp"
#include "dpident/stats.hpp"

namespace dpident {

double scenario_regression(double x) {
  if (x < 0.0) {
    return 0.35 +
           x * (1.27 + x * (7.18 + x * (20.21 + x * (21.54 + x * 7.33))));
  }
  return 0.65 + x * (0.84 + x * (-3.0 + x * (7.99 + x * (-9.01 + x * 3.56))));
}

namespace {

Dataset scenario_dgp_impl(int scenario, int n, RngStream& stream) {
  if (n < 1) throw std::invalid_argument("scenario dgp requires N >= 1");
  std::vector<double> y(static_cast<std::size_t>(n));
  std::vector<double> x(static_cast<std::size_t>(n));
  std::vector<double> w(static_cast<std::size_t>(n));
  const double uniform_half_width = kScenarioErrorParam * std::sqrt(3.0);
  const double normal_sd = std::sqrt(kScenarioErrorParam);
  for (int i = 0; i < n; ++i) {
    const double xi = stream.uniform(-1.0, 1.0);
    const double u = scenario == 1
                         ? stream.uniform(-uniform_half_width, uniform_half_width)
                         : stream.normal(0.0, normal_sd);
    const auto idx = static_cast<std::size_t>(i);
    x[idx] = xi;
    y[idx] = scenario_regression(xi) + u;
    w[idx] = xi >= 0.0 ? 1.0 : 0.0;
  }
  return Dataset::rdd(std::move(y), std::move(x), std::move(w));
}

}  // namespace

Dataset scenario1_dgp(int n, RngStream& stream) {
  return scenario_dgp_impl(1, n, stream);
}

Dataset scenario2_dgp(int n, RngStream& stream) {
  return scenario_dgp_impl(2, n, stream);
}

Dataset scenario_dgp(int scenario, int n, RngStream& stream) {
  if (scenario != 1 && scenario != 2) {
    throw std::invalid_argument("scenario must be 1 or 2");
  }
  return scenario_dgp_impl(scenario, n, stream);
}

PathsResult run_paths(const ScenarioConfig& config, double noise_variance,
                      int n_paths, int n_from, int n_to, int n_step) {
  if (n_paths < 1 || n_from < 10 || n_to < n_from || n_step < 1) {
    throw std::invalid_argument("run_paths: invalid grid");
  }
  PathsResult result;
  result.config = config;
  result.noise_variance = noise_variance;
  result.paths.resize(static_cast<std::size_t>(n_paths));
  const double noise_scale = std::sqrt(noise_variance / 2.0);

  RngStream root(config.master_seed, 0x70617468);  // paths stream family
  parallel_for(n_paths, config.threads, [&](int p) {
    RngStream path_stream = root.substream(static_cast<std::uint64_t>(p));
    RngStream data_stream = path_stream.substream(0);
    Dataset full = scenario_dgp(config.scenario, n_to, data_stream);
    std::vector<PathPoint>& path = result.paths[static_cast<std::size_t>(p)];
    int point_index = 0;
    for (int n = n_from; n <= n_to; n += n_step, ++point_index) {
      // Prefix-grown sample: the first n records of the path's dataset.
      Dataset prefix = Dataset::rdd(
          std::vector<double>(full.y().begin(), full.y().begin() + n),
          std::vector<double>(full.x().begin(), full.x().begin() + n),
          std::vector<double>(full.w().begin(), full.w().begin() + n));
      RngStream noise_stream =
          path_stream.substream(1000 + static_cast<std::uint64_t>(point_index));
      PathPoint point;
      point.n = n;
      try {
        const double h =
            select_bandwidth(prefix, 0.0, config.bandwidth, config.kernel);
        const RddFit fit = local_linear_sharp(prefix, 0.0, config.kernel, h);
        point.raw = fit.tau_hat;
      } catch (const DomainError&) {
        point.raw = std::numeric_limits<double>::quiet_NaN();
      }
      const double noise =
          noise_scale > 0.0 ? noise_stream.laplace(0.0, noise_scale) : 0.0;
      point.estimate = point.raw + noise;
      path.push_back(point);
    }
  });

  std::vector<double> terminal;
  for (const auto& path : result.paths) {
    if (!path.empty() && std::isfinite(path.back().estimate)) {
      terminal.push_back(path.back().estimate);
    }
  }
  if (terminal.size() > 1) {
    const auto [lo, hi] = std::minmax_element(terminal.begin(), terminal.end());
    result.terminal_spread = *hi - *lo;
  }
  return result;
}

double RejectionTable::rate(int n, double variance, double alpha) const {
  for (const RejectionCell& cell : cells) {
    if (cell.n == n && cell.noise_variance == variance && cell.alpha == alpha) {
      return cell.rejection_rate;
    }
  }
  throw std::invalid_argument("rejection table: no such cell");
}

RejectionTable run_rejection_table(const ScenarioConfig& config) {
  if (config.sims < 1) {
    throw std::invalid_argument("run_rejection_table requires sims >= 1");
  }
  RejectionTable table;
  table.config = config;

  RngStream root(config.master_seed, 0x7461626c);  // table stream family
  for (std::size_t ni = 0; ni < config.n_values.size(); ++ni) {
    const int n = config.n_values[ni];
    const std::size_t v_count = config.noise_variances.size();
    const std::size_t a_count = config.alphas.size();
    // rejections[variance][alpha] accumulated over replications.
    std::vector<std::vector<int>> rejections(
        v_count, std::vector<int>(a_count, 0));
    std::vector<int> failed(static_cast<std::size_t>(config.sims), 0);
    std::vector<std::vector<std::vector<unsigned char>>> hits(
        static_cast<std::size_t>(config.sims),
        std::vector<std::vector<unsigned char>>(
            v_count, std::vector<unsigned char>(a_count, 0)));

    RngStream n_stream = root.substream(ni);
    parallel_for(config.sims, config.threads, [&](int rep) {
      RngStream rep_stream = n_stream.substream(static_cast<std::uint64_t>(rep));
      RngStream data_stream = rep_stream.substream(0);
      const Dataset data = scenario_dgp(config.scenario, n, data_stream);
      double tau, se;
      try {
        const double h =
            select_bandwidth(data, 0.0, config.bandwidth, config.kernel);
        const RddFit fit = local_linear_sharp(data, 0.0, config.kernel, h);
        tau = fit.tau_hat;
        se = fit.se_tau;
      } catch (const DomainError&) {
        failed[static_cast<std::size_t>(rep)] = 1;
        return;
      }
      for (std::size_t vi = 0; vi < v_count; ++vi) {
        const double variance = config.noise_variances[vi];
        const double b = std::sqrt(variance / 2.0);
        RngStream noise_stream = rep_stream.substream(1 + vi);
        const double noise = b > 0.0 ? noise_stream.laplace(0.0, b) : 0.0;
        const double dp_tau = tau + noise;
        for (std::size_t ai = 0; ai < a_count; ++ai) {
          const double crit = normal_laplace_two_sided_critical(
              se, b, config.alphas[ai]);
          hits[static_cast<std::size_t>(rep)][vi][ai] =
              std::fabs(dp_tau) > crit ? 1 : 0;
        }
      }
    });

    int failed_total = 0;
    for (int rep = 0; rep < config.sims; ++rep) {
      failed_total += failed[static_cast<std::size_t>(rep)];
      for (std::size_t vi = 0; vi < v_count; ++vi) {
        for (std::size_t ai = 0; ai < a_count; ++ai) {
          rejections[vi][ai] += hits[static_cast<std::size_t>(rep)][vi][ai];
        }
      }
    }
    for (std::size_t vi = 0; vi < v_count; ++vi) {
      for (std::size_t ai = 0; ai < a_count; ++ai) {
        RejectionCell cell;
        cell.n = n;
        cell.noise_variance = config.noise_variances[vi];
        cell.alpha = config.alphas[ai];
        cell.rejection_rate = static_cast<double>(rejections[vi][ai]) /
                              static_cast<double>(config.sims - failed_total);
        cell.failed_fits = failed_total;
        table.cells.push_back(cell);
      }
    }
  }
  return table;
}

std::string rejection_table_csv(const RejectionTable& table,
                                const std::string& provenance) {
  CsvWriter csv(provenance);
  csv.header({"n", "noise_variance", "alpha", "rejection_rate", "failed_fits"});
  for (const RejectionCell& cell : table.cells) {
    csv.row({static_cast<long>(cell.n), cell.noise_variance, cell.alpha,
             cell.rejection_rate, static_cast<long>(cell.failed_fits)});
  }
  return csv.str();
}

std::string paths_csv(const PathsResult& result, const std::string& provenance) {
  CsvWriter csv(provenance);
  csv.header({"path", "n", "raw_tau", "dp_estimate"});
  for (std::size_t p = 0; p < result.paths.size(); ++p) {
    for (const PathPoint& point : result.paths[p]) {
      csv.row({static_cast<long>(p), static_cast<long>(point.n), point.raw,
               point.estimate});
    }
  }
  return csv.str();
}

}  // namespace dpident
