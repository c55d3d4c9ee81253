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
#include "dpident/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "dpident/data_model.hpp"
#include "dpident/diagnostics.hpp"
#include "dpident/errors.hpp"
#include "dpident/identification.hpp"
#include "dpident/io.hpp"
#include "dpident/kernels.hpp"
#include "dpident/mechanisms.hpp"
#include "dpident/montecarlo.hpp"
#include "dpident/rdd.hpp"
#include "dpident/regimes.hpp"
#include "dpident/sensitivity.hpp"
#include "dpident/stats.hpp"

namespace dpident::cli {
namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Global {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out_dir = ".";
  std::string config_path;
  json config = json::object();
};

// Binds every --flag to a config key "section.key"; options the user did not
// pass on the command line fall back to the config file. The registered
// bindings double as the validation schema (mirrored in
// docs/config-schema.json).
class ConfigBinder {
 public:
  template <typename T>
  void bind(CLI::Option* opt, const std::string& section,
            const std::string& key, T* target) {
    schema_[section].insert(key);
    fillers_.push_back([opt, section, key, target](const json& config) {
      if (opt != nullptr && opt->count() > 0) return;
      const auto sec = config.find(section);
      if (sec == config.end()) return;
      const auto val = sec->find(key);
      if (val == sec->end()) return;
      try {
        *target = val->template get<T>();
      } catch (const json::exception&) {
        throw std::invalid_argument("config: bad type for '" + section + "." +
                                    key + "'");
      }
    });
  }

  void validate(const json& config) const {
    if (!config.is_object()) {
      throw std::invalid_argument("config: top level must be a JSON object");
    }
    static const std::set<std::string> kGlobals{"seed", "threads", "out"};
    for (const auto& [key, value] : config.items()) {
      if (kGlobals.count(key) != 0) continue;
      const auto section = schema_.find(key);
      if (section == schema_.end()) {
        throw std::invalid_argument("config: unknown section '" + key + "'");
      }
      if (!value.is_object()) {
        throw std::invalid_argument("config: section '" + key +
                                    "' must be an object");
      }
      for (const auto& [inner, ignored] : value.items()) {
        if (section->second.count(inner) == 0) {
          throw std::invalid_argument("config: unknown key '" + key + "." +
                                      inner + "'");
        }
      }
    }
  }

  void apply(const json& config) const {
    for (const auto& fill : fillers_) fill(config);
  }

 private:
  std::map<std::string, std::set<std::string>> schema_;
  std::vector<std::function<void(const json&)>> fillers_;
};

// Thread count is deliberately excluded: results are deterministic in the
// seed alone, independent of the worker count.
json provenance_json(const std::string& command, const Global& global) {
  return json{{"tool", "dpident"},
              {"version", kVersion},
              {"command", command},
              {"seed", global.seed}};
}

std::string provenance_string(const std::string& command, const json& params,
                              const Global& global) {
  json p = provenance_json(command, global);
  p["params"] = params;
  return p.dump();
}

json finite_or_tag(double v) {
  if (std::isinf(v)) return json(v > 0 ? "inf" : "-inf");
  return json(v);
}

json interval_json(const Interval& iv) {
  return json{{"lo", finite_or_tag(iv.lo)}, {"hi", finite_or_tag(iv.hi)}};
}

json sensitivity_report_json(const SensitivityReport& report) {
  json j;
  j["kind"] = sensitivity_kind_name(report.kind);
  if (report.kind == SensitivityKind::kFinite ||
      report.kind == SensitivityKind::kBoundedBelow) {
    j["value"] = finite_or_tag(report.value);
  }
  if (report.kind == SensitivityKind::kDecayingRate) {
    j["rate"] = {{"coeff", report.rate.coeff},
                 {"n_power", report.rate.n_power},
                 {"log_power", report.rate.log_power}};
  }
  j["detail"] = report.detail;
  return j;
}

json mechanism_report_json(const MechanismReport& rep) {
  json scales;
  for (const auto& [k, v] : rep.scale_params) scales[k] = finite_or_tag(v);
  json j{{"mechanism", rep.mechanism},
         {"estimate", rep.estimate},
         {"raw_statistic", rep.raw_statistic},
         {"noise_draw", finite_or_tag(rep.noise_draw)},
         {"privacy",
          {{"epsilon", finite_or_tag(rep.privacy.epsilon)},
           {"delta", rep.privacy.delta}}},
         {"scale_params", scales},
         {"stream", {{"seed", rep.seed}, {"stream_id", rep.stream_id}}}};
  if (rep.all_truncated) j["all_truncated"] = true;
  return j;
}

Interval parse_range(const std::vector<double>& range, const char* what) {
  if (range.size() != 2 || !(range[0] <= range[1])) {
    throw std::invalid_argument(std::string(what) + " expects 'lo hi'");
  }
  return Interval{range[0], range[1]};
}

BandwidthStrategy parse_bandwidth(const std::string& spec) {
  if (spec == "ik") return IkBandwidth{};
  if (spec == "rot") return RuleOfThumbBandwidth{1.0};
  if (spec.rfind("rot:", 0) == 0) {
    return RuleOfThumbBandwidth{std::stod(spec.substr(4))};
  }
  try {
    std::size_t used = 0;
    const double h = std::stod(spec, &used);
    if (used != spec.size()) throw std::invalid_argument(spec);
    return FixedBandwidth{h};
  } catch (const std::exception&) {
    throw std::invalid_argument("bandwidth must be 'ik', 'rot[:c]' or a number");
  }
}

std::string out_path(const Global& global, const std::string& name) {
  if (global.out_dir.empty() || global.out_dir == ".") return name;
  return global.out_dir + "/" + name;
}

json bin_series_json(const BinSeries& series) {
  return json{{"edges", series.edges},
              {"midpoints", series.midpoints},
              {"values", series.values},
              {"counts", series.counts}};
}

void write_bin_series_csv(const BinSeries& series, const std::string& path,
                          const std::string& provenance) {
  CsvWriter csv(provenance);
  csv.header({"bin_lo", "bin_hi", "midpoint", "value", "count"});
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    csv.row({series.edges[i], series.edges[i + 1], series.midpoints[i],
             series.values[i], series.counts[i]});
  }
  csv.write_file(path);
}

void write_bin_series_svg(const BinSeries& series, const std::string& title,
                          const std::string& path,
                          const std::string& provenance) {
  SvgChart chart(title, provenance);
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    if (std::isnan(series.values[i])) continue;
    xs.push_back(series.midpoints[i]);
    ys.push_back(series.values[i]);
  }
  chart.add_polyline(xs, ys, "#1f77b4");
  chart.write_file(path);
}

json regime_label_json(const RegimeLabel& label) {
  json j{{"family", label.family == MechanismFamily::kBernoulliLaplace
                        ? "bernoulli-laplace"
                        : "truncated-weighted-mean"},
         {"label", regime_name(label.regime)}};
  if (label.c > 0.0) j["c"] = label.c;
  if (label.lambda_bar > 0.0) j["lambda_bar"] = label.lambda_bar;
  if (label.delta_bar > 0.0) j["delta_bar"] = finite_or_tag(label.delta_bar);
  return j;
}

json limit_json(const LimitDescriptor& limit) {
  switch (limit.kind) {
    case LimitDescriptor::Kind::kPointMass:
      return json{{"kind", "PointMass"}, {"point", limit.point}};
    case LimitDescriptor::Kind::kBernoulliHalf:
      return json{{"kind", "BernoulliHalf"},
                  {"support", {limit.space.lo, limit.space.hi}}};
    case LimitDescriptor::Kind::kProjectedLaplace:
      return json{{"kind", "ProjectedLaplace"},
                  {"center", limit.point},
                  {"scale", limit.scale}};
    case LimitDescriptor::Kind::kPoissonMean:
      return json{{"kind", "PoissonMean"}, {"c", limit.c}};
    case LimitDescriptor::Kind::kPoissonMeanPlusLaplace:
      return json{{"kind", "PoissonMeanPlusLaplace"},
                  {"c", limit.c},
                  {"scale", limit.scale}};
  }
  return json();
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  CLI::App app{"differentially private estimation and identification toolkit"};
  app.require_subcommand(1);
  ConfigBinder binder;

  Global global;
  auto* opt_seed = app.add_option("--seed", global.seed, "master seed");
  auto* opt_threads =
      app.add_option("--threads", global.threads, "worker threads (0 = auto)");
  auto* opt_out = app.add_option("--out", global.out_dir, "output directory");
  app.add_option("--config", global.config_path, "JSON configuration file");

  // --- sensitivity ---------------------------------------------------------
  struct {
    std::string estimator = "nr-boundary";
    std::string kernel = "triangular";
    std::vector<double> y_range{0.0, 1.0};
    std::vector<double> y_range_left, y_range_right, x_range;
    int m_left = 1, m_right = 1, n = 100;
    double eigenvalue_floor = 0.0;
    bool treatment_variation = false;
    int t = 1;
    double c1 = 0.0, c2 = 1.0, d1 = 0.0, d2 = 1.0;
    double h_coeff = 1.0, h_n_power = -0.3, h_log_power = 0.0;
    int ref_n = 100;
  } sens;
  auto* sub_sens =
      app.add_subcommand("sensitivity", "global sensitivity calculators");
  binder.bind(sub_sens->add_option(
                  "--estimator", sens.estimator,
                  "nr-boundary|local-linear|fuzzy-ll|ate|weighted-mean-replace|"
                  "weighted-mean-drop"),
              "sensitivity", "estimator", &sens.estimator);
  binder.bind(sub_sens->add_option("--kernel", sens.kernel, "kernel name"),
              "sensitivity", "kernel", &sens.kernel);
  binder.bind(
      sub_sens->add_option("--y-range", sens.y_range, "outcome range lo hi")
          ->expected(2),
      "sensitivity", "y_range", &sens.y_range);
  binder.bind(sub_sens->add_option("--y-range-left", sens.y_range_left,
                                   "left outcome range")
                  ->expected(2),
              "sensitivity", "y_range_left", &sens.y_range_left);
  binder.bind(sub_sens->add_option("--y-range-right", sens.y_range_right,
                                   "right outcome range")
                  ->expected(2),
              "sensitivity", "y_range_right", &sens.y_range_right);
  binder.bind(sub_sens->add_option("--x-range", sens.x_range,
                                   "running-variable support")
                  ->expected(2),
              "sensitivity", "x_range", &sens.x_range);
  binder.bind(sub_sens->add_option("--m-left", sens.m_left, "min left count"),
              "sensitivity", "m_left", &sens.m_left);
  binder.bind(sub_sens->add_option("--m-right", sens.m_right, "min right count"),
              "sensitivity", "m_right", &sens.m_right);
  binder.bind(sub_sens->add_option("--n", sens.n, "sample size"), "sensitivity",
              "n", &sens.n);
  binder.bind(sub_sens->add_option("--eigenvalue-floor", sens.eigenvalue_floor,
                                   "design eigenvalue floor"),
              "sensitivity", "eigenvalue_floor", &sens.eigenvalue_floor);
  binder.bind(sub_sens->add_flag("--treatment-variation",
                                 sens.treatment_variation,
                                 "restrict to treatment variation per side"),
              "sensitivity", "treatment_variation", &sens.treatment_variation);
  binder.bind(sub_sens->add_option("--t", sens.t, "lemma T"), "sensitivity",
              "t", &sens.t);
  binder.bind(sub_sens->add_option("--c1", sens.c1, "weight lower bound"),
              "sensitivity", "c1", &sens.c1);
  binder.bind(sub_sens->add_option("--c2", sens.c2, "weight upper bound"),
              "sensitivity", "c2", &sens.c2);
  binder.bind(sub_sens->add_option("--d1", sens.d1, "value lower bound"),
              "sensitivity", "d1", &sens.d1);
  binder.bind(sub_sens->add_option("--d2", sens.d2, "value upper bound"),
              "sensitivity", "d2", &sens.d2);
  binder.bind(sub_sens->add_option("--h-coeff", sens.h_coeff, "h sequence coeff"),
              "sensitivity", "h_coeff", &sens.h_coeff);
  binder.bind(
      sub_sens->add_option("--h-n-power", sens.h_n_power, "h sequence N power"),
      "sensitivity", "h_n_power", &sens.h_n_power);
  binder.bind(sub_sens->add_option("--h-log-power", sens.h_log_power,
                                   "h sequence log power"),
              "sensitivity", "h_log_power", &sens.h_log_power);
  binder.bind(sub_sens->add_option("--ref-n", sens.ref_n, "reference N"),
              "sensitivity", "ref_n", &sens.ref_n);

  // --- mechanism -----------------------------------------------------------
  struct {
    std::string mech = "laplace-mean";
    std::string data_path, data_prime_path;
    double epsilon = 1.0;
    double gamma = 0.25;
    double delta_trunc = 0.1;
    std::string kind = "laplace";
    double pi = 0.5;
    double lambda = 1.0;
    double theta_lo = 0.0, theta_hi = 1.0;
    int trials = 100000;
    double delta = 0.0;
  } mech;
  auto* sub_mech = app.add_subcommand("mechanism", "dp mechanisms and audits");
  sub_mech->require_subcommand(1);
  auto* sub_mech_run = sub_mech->add_subcommand("run", "run a mechanism once");
  auto* sub_mech_audit =
      sub_mech->add_subcommand("audit", "empirical dp audit");
  for (CLI::App* s : {sub_mech_run, sub_mech_audit}) {
    binder.bind(s->add_option("--mech", mech.mech,
                              "laplace-mean|exponential-mean|truncated-"
                              "weighted-mean|bernoulli-laplace"),
                "mechanism", "mech", &mech.mech);
    binder.bind(s->add_option("--data", mech.data_path, "dataset CSV"),
                "mechanism", "data", &mech.data_path);
    binder.bind(s->add_option("--epsilon", mech.epsilon, "privacy epsilon"),
                "mechanism", "epsilon", &mech.epsilon);
    binder.bind(s->add_option("--gamma", mech.gamma, "exponential gamma"),
                "mechanism", "gamma", &mech.gamma);
    binder.bind(
        s->add_option("--delta-trunc", mech.delta_trunc, "truncation threshold"),
        "mechanism", "delta_trunc", &mech.delta_trunc);
    binder.bind(s->add_option("--kind", mech.kind, "laplace|exponential"),
                "mechanism", "kind", &mech.kind);
    binder.bind(s->add_option("--pi", mech.pi, "keep probability"), "mechanism",
                "pi", &mech.pi);
    binder.bind(s->add_option("--lambda", mech.lambda, "laplace scale"),
                "mechanism", "lambda", &mech.lambda);
    binder.bind(s->add_option("--theta-lo", mech.theta_lo, "parameter space lo"),
                "mechanism", "theta_lo", &mech.theta_lo);
    binder.bind(s->add_option("--theta-hi", mech.theta_hi, "parameter space hi"),
                "mechanism", "theta_hi", &mech.theta_hi);
  }
  binder.bind(sub_mech_audit->add_option("--data-prime", mech.data_prime_path,
                                         "adjacent dataset CSV"),
              "mechanism", "data_prime", &mech.data_prime_path);
  binder.bind(sub_mech_audit->add_option("--trials", mech.trials, "audit trials"),
              "mechanism", "trials", &mech.trials);
  binder.bind(sub_mech_audit->add_option("--delta", mech.delta, "privacy delta"),
              "mechanism", "delta", &mech.delta);

  // --- regimes --------------------------------------------------------------
  struct {
    std::string family = "bernoulli-laplace";
    double pi_coeff = 1.0, pi_n_power = 0.0, pi_log_power = 0.0;
    double lambda_coeff = 1.0, lambda_n_power = 0.0, lambda_log_power = 0.0;
    double delta_coeff = 1.0, delta_n_power = 0.0, delta_log_power = 0.0;
    std::vector<double> n_grid{1000.0, 10000.0, 100000.0};
    int replications = 2000;
    double epsilon = 1.0;
  } reg;
  auto* sub_reg = app.add_subcommand("regimes", "asymptotic regime tools");
  sub_reg->require_subcommand(1);
  auto* sub_reg_classify =
      sub_reg->add_subcommand("classify", "classify regimes");
  auto* sub_reg_sim =
      sub_reg->add_subcommand("simulate", "simulate weak-limit convergence");
  for (CLI::App* s : {sub_reg_classify, sub_reg_sim}) {
    binder.bind(s->add_option("--family", reg.family,
                              "bernoulli-laplace|truncated"),
                "regimes", "family", &reg.family);
    binder.bind(s->add_option("--pi-coeff", reg.pi_coeff, "pi coeff"),
                "regimes", "pi_coeff", &reg.pi_coeff);
    binder.bind(s->add_option("--pi-n-power", reg.pi_n_power, "pi N power"),
                "regimes", "pi_n_power", &reg.pi_n_power);
    binder.bind(
        s->add_option("--pi-log-power", reg.pi_log_power, "pi log power"),
        "regimes", "pi_log_power", &reg.pi_log_power);
    binder.bind(s->add_option("--lambda-coeff", reg.lambda_coeff, "lambda coeff"),
                "regimes", "lambda_coeff", &reg.lambda_coeff);
    binder.bind(
        s->add_option("--lambda-n-power", reg.lambda_n_power, "lambda N power"),
        "regimes", "lambda_n_power", &reg.lambda_n_power);
    binder.bind(s->add_option("--lambda-log-power", reg.lambda_log_power,
                              "lambda log power"),
                "regimes", "lambda_log_power", &reg.lambda_log_power);
    binder.bind(s->add_option("--delta-coeff", reg.delta_coeff, "delta coeff"),
                "regimes", "delta_coeff", &reg.delta_coeff);
    binder.bind(
        s->add_option("--delta-n-power", reg.delta_n_power, "delta N power"),
        "regimes", "delta_n_power", &reg.delta_n_power);
    binder.bind(s->add_option("--delta-log-power", reg.delta_log_power,
                              "delta log power"),
                "regimes", "delta_log_power", &reg.delta_log_power);
  }
  binder.bind(sub_reg_sim->add_option("--n-grid", reg.n_grid, "sample size grid"),
              "regimes", "n_grid", &reg.n_grid);
  binder.bind(sub_reg_sim->add_option("--replications", reg.replications,
                                      "replications per N"),
              "regimes", "replications", &reg.replications);
  binder.bind(sub_reg_sim->add_option("--epsilon", reg.epsilon,
                                      "epsilon (truncated family)"),
              "regimes", "epsilon", &reg.epsilon);

  // --- rdd -------------------------------------------------------------------
  struct {
    std::string design = "sharp-ll";
    std::string data_path;
    double cutoff = 0.0;
    std::string kernel = "triangular";
    std::string bandwidth = "ik";
    double noise_variance = -1.0;
    double epsilon = -1.0;
    std::vector<double> y_range{0.0, 1.0};
    int m_left = 1, m_right = 1;
    bool clip = false;
  } rdd_args;
  auto* sub_rdd = app.add_subcommand("rdd", "rdd and ate estimators");
  binder.bind(sub_rdd->add_option("--design", rdd_args.design,
                                  "sharp-nr|sharp-ll|fuzzy-ll|ate"),
              "rdd", "design", &rdd_args.design);
  binder.bind(sub_rdd->add_option("--data", rdd_args.data_path, "dataset CSV"),
              "rdd", "data", &rdd_args.data_path);
  binder.bind(sub_rdd->add_option("--cutoff", rdd_args.cutoff, "cutoff c"),
              "rdd", "cutoff", &rdd_args.cutoff);
  binder.bind(sub_rdd->add_option("--kernel", rdd_args.kernel, "kernel name"),
              "rdd", "kernel", &rdd_args.kernel);
  binder.bind(sub_rdd->add_option("--bandwidth", rdd_args.bandwidth,
                                  "'ik', 'rot[:c]' or a number"),
              "rdd", "bandwidth", &rdd_args.bandwidth);
  binder.bind(sub_rdd->add_option("--noise-variance", rdd_args.noise_variance,
                                  "fixed mechanism noise variance"),
              "rdd", "noise_variance", &rdd_args.noise_variance);
  binder.bind(
      sub_rdd->add_option("--epsilon", rdd_args.epsilon, "calibrated epsilon"),
      "rdd", "epsilon", &rdd_args.epsilon);
  binder.bind(sub_rdd->add_option("--y-range", rdd_args.y_range,
                                  "declared outcome range")
                  ->expected(2),
              "rdd", "y_range", &rdd_args.y_range);
  binder.bind(sub_rdd->add_option("--m-left", rdd_args.m_left, "min left count"),
              "rdd", "m_left", &rdd_args.m_left);
  binder.bind(
      sub_rdd->add_option("--m-right", rdd_args.m_right, "min right count"),
      "rdd", "m_right", &rdd_args.m_right);
  binder.bind(sub_rdd->add_flag("--clip", rdd_args.clip, "clip propensity scores"),
              "rdd", "clip", &rdd_args.clip);

  // --- diagnose ---------------------------------------------------------------
  struct {
    std::string data_path;
    double cutoff = 0.0;
    double bandwidth = 0.3;
    int first_stage_bins = 0;
    double tau = 0.3;
    double se = 0.05;
    double noise_variance = 0.0;
    double alpha = 0.05;
    int sims = 2000;
    double bin_width = 0.1;
    std::vector<double> edges;
    double epsilon = 1.0;
    bool svg = false;
  } diag;
  auto* sub_diag =
      app.add_subcommand("diagnose", "specification and graphical tools");
  sub_diag->require_subcommand(1);
  auto* sub_diag_mccrary =
      sub_diag->add_subcommand("mccrary", "density discontinuity test");
  auto* sub_diag_power =
      sub_diag->add_subcommand("power", "dp test power simulation");
  auto* sub_diag_bins =
      sub_diag->add_subcommand("bins", "cutoff-anchored binned means");
  auto* sub_diag_hist = sub_diag->add_subcommand("dphist", "dp histogram");
  for (CLI::App* s : {sub_diag_mccrary, sub_diag_bins, sub_diag_hist}) {
    binder.bind(s->add_option("--data", diag.data_path, "dataset CSV"),
                "diagnose", "data", &diag.data_path);
    binder.bind(s->add_option("--cutoff", diag.cutoff, "cutoff c"), "diagnose",
                "cutoff", &diag.cutoff);
  }
  binder.bind(sub_diag_mccrary->add_option("--bandwidth", diag.bandwidth,
                                           "second-stage bandwidth"),
              "diagnose", "bandwidth", &diag.bandwidth);
  binder.bind(
      sub_diag_mccrary->add_option("--first-stage-bins", diag.first_stage_bins,
                                   "first-stage bin count (0 = 2 sqrt(N))"),
      "diagnose", "first_stage_bins", &diag.first_stage_bins);
  binder.bind(sub_diag_power->add_option("--tau", diag.tau, "true effect"),
              "diagnose", "tau", &diag.tau);
  binder.bind(sub_diag_power->add_option("--se", diag.se, "known standard error"),
              "diagnose", "se", &diag.se);
  binder.bind(sub_diag_power->add_option("--noise-variance", diag.noise_variance,
                                         "mechanism noise variance"),
              "diagnose", "noise_variance", &diag.noise_variance);
  binder.bind(sub_diag_power->add_option("--alpha", diag.alpha, "test level"),
              "diagnose", "alpha", &diag.alpha);
  binder.bind(sub_diag_power->add_option("--sims", diag.sims, "simulations"),
              "diagnose", "sims", &diag.sims);
  binder.bind(sub_diag_bins->add_option("--bin-width", diag.bin_width, "bin width"),
              "diagnose", "bin_width", &diag.bin_width);
  binder.bind(sub_diag_hist->add_option("--edges", diag.edges, "bin edges"),
              "diagnose", "edges", &diag.edges);
  binder.bind(sub_diag_hist->add_option("--epsilon", diag.epsilon, "privacy epsilon"),
              "diagnose", "epsilon", &diag.epsilon);
  for (CLI::App* s : {sub_diag_bins, sub_diag_hist}) {
    s->add_flag("--svg", diag.svg, "also write an SVG chart");
  }

  // --- identify ----------------------------------------------------------------
  struct {
    double t = 0.5;
    double alpha = 0.05;
    double theta0 = 0.5;
    double k_lo = 0.0, k_hi = 1.0;
    int grid_size = 50;
    int r_degree = 4;
    double radius = 0.2;
    bool constraint = true;
    bool signed_flux = false;
    std::vector<double> n_grid{100.0, 1000.0, 10000.0, 100000.0};
    int replications = 1000;
    std::string selector = "decision";
    double delta = 0.01;
  } ident;
  auto* sub_ident =
      app.add_subcommand("identify", "random-set identification tools");
  sub_ident->require_subcommand(1);
  auto* sub_ident_cr =
      sub_ident->add_subcommand("credible-region", "posterior credible region");
  auto* sub_ident_cont =
      sub_ident->add_subcommand("containment", "containment functional");
  auto* sub_ident_fit =
      sub_ident->add_subcommand("fit-map", "decision-density fit");
  auto* sub_ident_cons = sub_ident->add_subcommand(
      "consistency", "decision-rule consistency experiment");
  binder.bind(sub_ident_cr->add_option("--t", ident.t, "observed output t"),
              "identify", "t", &ident.t);
  binder.bind(sub_ident_cr->add_option("--alpha", ident.alpha, "level"),
              "identify", "alpha", &ident.alpha);
  for (CLI::App* s : {sub_ident_cont, sub_ident_cons}) {
    binder.bind(s->add_option("--theta0", ident.theta0, "target parameter"),
                "identify", "theta0", &ident.theta0);
  }
  binder.bind(sub_ident_cont->add_option("--k-lo", ident.k_lo, "test set lo"),
              "identify", "k_lo", &ident.k_lo);
  binder.bind(sub_ident_cont->add_option("--k-hi", ident.k_hi, "test set hi"),
              "identify", "k_hi", &ident.k_hi);
  binder.bind(sub_ident_fit->add_option("--grid-size", ident.grid_size,
                                        "grid size K"),
              "identify", "grid_size", &ident.grid_size);
  binder.bind(
      sub_ident_fit->add_option("--r-degree", ident.r_degree, "basis degree R"),
      "identify", "r_degree", &ident.r_degree);
  binder.bind(
      sub_ident_fit->add_option("--radius", ident.radius, "midpoint radius"),
      "identify", "radius", &ident.radius);
  binder.bind(sub_ident_fit->add_flag("--constraint,!--no-constraint",
                                      ident.constraint,
                                      "normalization constraint"),
              "identify", "constraint", &ident.constraint);
  binder.bind(sub_ident_fit->add_flag("--signed-flux", ident.signed_flux,
                                      "signed boundary measure"),
              "identify", "signed_flux", &ident.signed_flux);
  binder.bind(
      sub_ident_cons->add_option("--n-grid", ident.n_grid, "sample size grid"),
      "identify", "n_grid", &ident.n_grid);
  binder.bind(sub_ident_cons->add_option("--replications", ident.replications,
                                         "replications per N"),
              "identify", "replications", &ident.replications);
  binder.bind(sub_ident_cons->add_option("--selector", ident.selector,
                                         "decision|uniform"),
              "identify", "selector", &ident.selector);
  binder.bind(
      sub_ident_cons->add_option("--delta", ident.delta, "boundary tolerance"),
      "identify", "delta", &ident.delta);

  // --- montecarlo ----------------------------------------------------------------
  struct {
    int scenario = 1;
    int sims = 5000;
    std::vector<int> n_values{500, 2000, 5000};
    std::vector<double> noise_variances{0.0, 0.002, 2.0, 200.0};
    std::vector<double> alphas{0.05, 0.01};
    double variance = 2.0;
    bool variance_given = false;
    int paths = 20;
    int n_from = 300, n_to = 4000, n_step = 100;
    std::string bandwidth = "ik";
    std::string kernel = "triangular";
  } mc;
  auto* sub_mc = app.add_subcommand("montecarlo", "simulation study");
  sub_mc->require_subcommand(1);
  auto* sub_mc_table =
      sub_mc->add_subcommand("table1", "rejection-rate table");
  auto* sub_mc_paths = sub_mc->add_subcommand("paths", "dp estimate paths");
  for (CLI::App* s : {sub_mc_table, sub_mc_paths}) {
    binder.bind(s->add_option("--scenario", mc.scenario, "1 or 2"),
                "montecarlo", "scenario", &mc.scenario);
    binder.bind(s->add_option("--bandwidth", mc.bandwidth, "bandwidth strategy"),
                "montecarlo", "bandwidth", &mc.bandwidth);
    binder.bind(s->add_option("--kernel", mc.kernel, "kernel name"),
                "montecarlo", "kernel", &mc.kernel);
  }
  binder.bind(sub_mc_table->add_option("--sims", mc.sims, "simulations per cell"),
              "montecarlo", "sims", &mc.sims);
  binder.bind(sub_mc_table->add_option("--n-values", mc.n_values, "sample sizes"),
              "montecarlo", "n_values", &mc.n_values);
  binder.bind(sub_mc_table->add_option("--variances", mc.noise_variances,
                                       "noise variances"),
              "montecarlo", "noise_variances", &mc.noise_variances);
  binder.bind(sub_mc_table->add_option("--alphas", mc.alphas, "test levels"),
              "montecarlo", "alphas", &mc.alphas);
  auto* opt_variance =
      sub_mc_paths->add_option("--variance", mc.variance, "noise variance");
  binder.bind(opt_variance, "montecarlo", "variance", &mc.variance);
  binder.bind(sub_mc_paths->add_option("--paths", mc.paths, "number of paths"),
              "montecarlo", "paths", &mc.paths);
  binder.bind(sub_mc_paths->add_option("--n-from", mc.n_from, "first sample size"),
              "montecarlo", "n_from", &mc.n_from);
  binder.bind(sub_mc_paths->add_option("--n-to", mc.n_to, "last sample size"),
              "montecarlo", "n_to", &mc.n_to);
  binder.bind(sub_mc_paths->add_option("--n-step", mc.n_step, "sample size step"),
              "montecarlo", "n_step", &mc.n_step);

  for (CLI::App* sub : app.get_subcommands({})) {
    sub->fallthrough();
    for (CLI::App* nested : sub->get_subcommands({})) nested->fallthrough();
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help() << std::flush;
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (!global.config_path.empty()) {
      std::ifstream f(global.config_path);
      if (!f) {
        throw std::invalid_argument("cannot open config file: " +
                                    global.config_path);
      }
      try {
        f >> global.config;
      } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config parse error: ") +
                                    e.what());
      }
      binder.validate(global.config);
      if (opt_seed->count() == 0 && global.config.contains("seed")) {
        global.seed = global.config.at("seed").get<std::uint64_t>();
      }
      if (opt_threads->count() == 0 && global.config.contains("threads")) {
        global.threads = global.config.at("threads").get<int>();
      }
      if (opt_out->count() == 0 && global.config.contains("out")) {
        global.out_dir = global.config.at("out").get<std::string>();
      }
      binder.apply(global.config);
    }
    mc.variance_given =
        opt_variance->count() > 0 ||
        (global.config.contains("montecarlo") &&
         global.config.at("montecarlo").contains("variance"));

    json result;
    std::string command;

    if (sub_sens->parsed()) {
      command = "sensitivity";
      const KernelSpec kernel = kernel_by_name(sens.kernel);
      const Interval shared = parse_range(sens.y_range, "--y-range");
      const Interval left =
          sens.y_range_left.empty()
              ? shared
              : parse_range(sens.y_range_left, "--y-range-left");
      const Interval right =
          sens.y_range_right.empty()
              ? shared
              : parse_range(sens.y_range_right, "--y-range-right");
      if (sens.estimator == "nr-boundary") {
        result = sensitivity_report_json(nr_boundary_sensitivity(
            kernel, left, right, sens.m_left, sens.m_right, sens.n));
      } else if (sens.estimator == "local-linear") {
        std::optional<double> floor;
        if (sens.eigenvalue_floor > 0.0) floor = sens.eigenvalue_floor;
        result = sensitivity_report_json(local_linear_sensitivity(
            kernel, left, right, floor, sens.m_left, sens.m_right));
      } else if (sens.estimator == "fuzzy-ll") {
        result = sensitivity_report_json(
            fuzzy_ll_sensitivity(kernel, left, right, sens.treatment_variation,
                                 sens.m_left, sens.m_right));
      } else if (sens.estimator == "ate") {
        const Interval x = sens.x_range.empty()
                               ? Interval{0.0, 1.0}
                               : parse_range(sens.x_range, "--x-range");
        result = sensitivity_report_json(ate_propensity_sensitivity(
            kernel, x,
            make_sequence(sens.h_coeff, sens.h_n_power, sens.h_log_power),
            sens.ref_n));
      } else if (sens.estimator == "weighted-mean-replace" ||
                 sens.estimator == "weighted-mean-drop") {
        const double value =
            sens.estimator == "weighted-mean-replace"
                ? weighted_mean_sensitivity_replace(sens.t, sens.c1, sens.c2,
                                                    sens.d1, sens.d2)
                : weighted_mean_sensitivity_drop(sens.t, sens.c1, sens.c2,
                                                 sens.d1, sens.d2);
        result = json{{"kind", std::isinf(value) ? "Infinite" : "Finite"},
                      {"value", finite_or_tag(value)},
                      {"detail", "weighted-mean lemma closed form"}};
      } else {
        throw std::invalid_argument("unknown --estimator '" + sens.estimator +
                                    "'");
      }
      result["estimator"] = sens.estimator;
      result["kernel"] = sens.kernel;
      result["y_range_left"] = interval_json(left);
      result["y_range_right"] = interval_json(right);
    } else if (sub_mech->parsed()) {
      const ParamSpace space = make_param_space(mech.theta_lo, mech.theta_hi);
      if (sub_mech_run->parsed()) {
        command = "mechanism run";
        if (mech.data_path.empty()) {
          throw std::invalid_argument("mechanism run requires --data");
        }
        const Dataset data = load_dataset_csv_file(mech.data_path);
        RngStream stream(global.seed, 0);
        MechanismReport rep;
        if (mech.mech == "laplace-mean") {
          rep = laplace_mean_dp(data, mech.epsilon, stream, space);
        } else if (mech.mech == "exponential-mean") {
          rep = exponential_mean_dp(data, mech.epsilon, mech.gamma, stream,
                                    space);
        } else if (mech.mech == "truncated-weighted-mean") {
          rep = truncated_weighted_mean_dp(
              data, mech.epsilon, mech.delta_trunc,
              mech.kind == "exponential" ? TruncatedKind::kExponential
                                         : TruncatedKind::kLaplace,
              mech.gamma, stream);
        } else if (mech.mech == "bernoulli-laplace") {
          rep = bernoulli_laplace_mean(data, mech.pi, mech.lambda, stream,
                                       space);
        } else {
          throw std::invalid_argument("unknown --mech '" + mech.mech + "'");
        }
        result = mechanism_report_json(rep);
        if (mech.mech == "bernoulli-laplace") {
          result["sufficient_condition_holds"] = bernoulli_laplace_sufficient(
              static_cast<double>(data.size()), mech.pi, mech.lambda,
              rep.privacy.epsilon);
        }
      } else {
        command = "mechanism audit";
        if (mech.data_path.empty() || mech.data_prime_path.empty()) {
          throw std::invalid_argument(
              "mechanism audit requires --data and --data-prime");
        }
        const Dataset d = load_dataset_csv_file(mech.data_path);
        const Dataset d_prime = load_dataset_csv_file(mech.data_prime_path);
        MechanismFn fn;
        if (mech.mech == "laplace-mean") {
          fn = [eps = mech.epsilon, space](const Dataset& data, RngStream& s) {
            return laplace_mean_dp(data, eps, s, space).estimate;
          };
        } else if (mech.mech == "exponential-mean") {
          fn = [eps = mech.epsilon, g = mech.gamma, space](const Dataset& data,
                                                           RngStream& s) {
            return exponential_mean_dp(data, eps, g, s, space).estimate;
          };
        } else if (mech.mech == "truncated-weighted-mean") {
          const TruncatedKind kind = mech.kind == "exponential"
                                         ? TruncatedKind::kExponential
                                         : TruncatedKind::kLaplace;
          fn = [eps = mech.epsilon, dt = mech.delta_trunc, kind,
                g = mech.gamma](const Dataset& data, RngStream& s) {
            return truncated_weighted_mean_dp(data, eps, dt, kind, g, s)
                .estimate;
          };
        } else if (mech.mech == "bernoulli-laplace") {
          fn = [pi = mech.pi, lambda = mech.lambda, space](const Dataset& data,
                                                           RngStream& s) {
            return bernoulli_laplace_mean(data, pi, lambda, s, space).estimate;
          };
        } else {
          throw std::invalid_argument("unknown --mech '" + mech.mech + "'");
        }
        RngStream stream(global.seed, 1);
        const AuditResult res =
            audit_dp(fn, d, d_prime, mech.trials, mech.delta, stream);
        result = json{{"epsilon_hat", res.disjoint_support
                                          ? json("inf")
                                          : json(res.epsilon_hat)},
                      {"half_width", res.half_width},
                      {"disjoint_support", res.disjoint_support},
                      {"binding_threshold", res.binding_threshold},
                      {"trials", res.trials}};
      }
    } else if (sub_reg->parsed()) {
      const SequenceSpec pi =
          make_sequence(reg.pi_coeff, reg.pi_n_power, reg.pi_log_power);
      const SequenceSpec lambda = make_sequence(
          reg.lambda_coeff, reg.lambda_n_power, reg.lambda_log_power);
      const SequenceSpec delta = make_sequence(
          reg.delta_coeff, reg.delta_n_power, reg.delta_log_power);
      if (sub_reg_classify->parsed()) {
        command = "regimes classify";
        if (reg.family == "bernoulli-laplace") {
          result = regime_label_json(classify_bernoulli_regime(lambda, pi));
        } else if (reg.family == "truncated") {
          result = regime_label_json(classify_truncation_regime(pi, delta));
        } else {
          throw std::invalid_argument("unknown --family '" + reg.family + "'");
        }
      } else {
        command = "regimes simulate";
        RngStream stream(global.seed, 2);
        ConvergenceResult sim;
        if (reg.family == "bernoulli-laplace") {
          BernoulliLaplacePopulation pop;
          pop.x = [](RngStream& s) { return s.uniform01(); };
          pop.mean_x = 0.5;
          sim = simulate_bernoulli_laplace_convergence(
              lambda, pi, pop, reg.n_grid, reg.replications, stream,
              global.threads);
        } else if (reg.family == "truncated") {
          TruncatedPopulation pop;
          pop.x = [](RngStream& s) { return 0.5 * s.uniform01(); };
          pop.w = [](RngStream& s) { return 0.5 + 0.5 * s.uniform01(); };
          pop.theta0 = 0.5 * std::log(2.0);
          sim = simulate_truncated_convergence(pi, delta, reg.epsilon, pop,
                                               reg.n_grid, reg.replications,
                                               stream, global.threads);
        } else {
          throw std::invalid_argument("unknown --family '" + reg.family + "'");
        }
        json points = json::array();
        for (const ConvergencePoint& p : sim.points) {
          points.push_back({{"n", p.n}, {"levy_distance", p.distance}});
        }
        result = json{{"regime", regime_label_json(sim.regime)},
                      {"limit", limit_json(sim.limit)},
                      {"points", points},
                      {"final_distance", sim.final_distance}};
      }
    } else if (sub_rdd->parsed()) {
      command = "rdd";
      if (rdd_args.data_path.empty()) {
        throw std::invalid_argument("rdd requires --data");
      }
      const Dataset data = load_dataset_csv_file(rdd_args.data_path);
      const KernelSpec kernel = kernel_by_name(rdd_args.kernel);
      const double h = select_bandwidth(
          data, rdd_args.cutoff, parse_bandwidth(rdd_args.bandwidth), kernel);
      if (rdd_args.design == "ate") {
        result = json{{"design", "ate"},
                      {"estimate",
                       ate_propensity(data, kernel, h, rdd_args.clip)},
                      {"bandwidth", h}};
      } else {
        RddDesign design;
        if (rdd_args.design == "sharp-nr") design = RddDesign::kSharpNr;
        else if (rdd_args.design == "sharp-ll") design = RddDesign::kSharpLocLin;
        else if (rdd_args.design == "fuzzy-ll") design = RddDesign::kFuzzyLocLin;
        else throw std::invalid_argument("unknown --design '" +
                                         rdd_args.design + "'");
        RddNoise noise = FixedVarianceNoise{0.0, std::nullopt};
        if (rdd_args.epsilon > 0.0) {
          const Interval range = parse_range(rdd_args.y_range, "--y-range");
          SensitivityReport report;
          switch (design) {
            case RddDesign::kSharpNr:
              report = nr_boundary_sensitivity(
                  kernel, range, range, rdd_args.m_left, rdd_args.m_right,
                  static_cast<int>(data.size()));
              break;
            case RddDesign::kSharpLocLin:
              report = local_linear_sensitivity(kernel, range, range,
                                                std::nullopt, rdd_args.m_left,
                                                rdd_args.m_right);
              break;
            case RddDesign::kFuzzyLocLin:
              report = fuzzy_ll_sensitivity(kernel, range, range, false,
                                            rdd_args.m_left, rdd_args.m_right);
              break;
          }
          noise = calibrated_noise_from_report(rdd_args.epsilon, report);
        } else if (rdd_args.noise_variance >= 0.0) {
          noise = FixedVarianceNoise{rdd_args.noise_variance, std::nullopt};
        }
        RngStream stream(global.seed, 3);
        const DpRddResult res = dp_rdd_estimate(design, data, rdd_args.cutoff,
                                                kernel, h, noise, stream);
        result = json{{"design", rdd_args.design},
                      {"estimate", res.estimate},
                      {"raw_tau", res.raw_tau},
                      {"noise_draw", res.noise_draw},
                      {"bandwidth", h},
                      {"se_tau", res.fit.se_tau},
                      {"n_left", res.fit.n_left},
                      {"n_right", res.fit.n_right},
                      {"laplace_scale", res.laplace_scale}};
        if (!std::isnan(res.epsilon)) {
          result["epsilon"] = res.epsilon;
          result["epsilon_is_annotation"] = res.epsilon_is_annotation;
        }
      }
    } else if (sub_diag->parsed()) {
      if (sub_diag_power->parsed()) {
        command = "diagnose power";
        RngStream stream(global.seed, 4);
        result = json{{"rejection_rate",
                       dp_test_power(diag.tau, diag.se, diag.noise_variance,
                                     diag.alpha, diag.sims, stream)},
                      {"tau", diag.tau},
                      {"se", diag.se},
                      {"noise_variance", diag.noise_variance},
                      {"alpha", diag.alpha},
                      {"sims", diag.sims}};
      } else {
        if (diag.data_path.empty()) {
          throw std::invalid_argument("this diagnose subcommand requires --data");
        }
        const Dataset data = load_dataset_csv_file(diag.data_path);
        if (sub_diag_mccrary->parsed()) {
          command = "diagnose mccrary";
          const McCraryResult res = mccrary_statistic(
              data.x(), diag.cutoff, diag.bandwidth, diag.first_stage_bins);
          result = json{{"theta_hat", res.theta_hat},
                        {"sigma_theta", res.sigma_theta},
                        {"t", res.t},
                        {"f_plus", res.f_plus},
                        {"f_minus", res.f_minus},
                        {"first_stage_binwidth", res.first_stage_binwidth}};
        } else if (sub_diag_bins->parsed()) {
          command = "diagnose bins";
          const BinSeries series =
              binned_means(data, diag.cutoff, diag.bin_width);
          const std::string prov = provenance_string(
              command,
              {{"cutoff", diag.cutoff}, {"bin_width", diag.bin_width}},
              global);
          const std::string csv_path = out_path(global, "bins.csv");
          write_bin_series_csv(series, csv_path, prov);
          if (diag.svg) {
            write_bin_series_svg(series, "binned outcome means",
                                 out_path(global, "bins.svg"), prov);
          }
          result = bin_series_json(series);
          result["csv"] = csv_path;
        } else {
          command = "diagnose dphist";
          std::vector<double> edges = diag.edges;
          if (edges.empty()) {
            const auto [lo, hi] =
                std::minmax_element(data.x().begin(), data.x().end());
            for (int i = 0; i <= 20; ++i) {
              edges.push_back(*lo + (*hi - *lo) * i / 20.0);
            }
          }
          RngStream stream(global.seed, 5);
          const BinSeries series =
              dp_histogram(data.x(), edges, diag.epsilon, stream);
          const std::string prov = provenance_string(
              command, {{"epsilon", diag.epsilon}}, global);
          const std::string csv_path = out_path(global, "dphist.csv");
          write_bin_series_csv(series, csv_path, prov);
          if (diag.svg) {
            write_bin_series_svg(series, "dp histogram",
                                 out_path(global, "dphist.svg"), prov);
          }
          result = bin_series_json(series);
          result["csv"] = csv_path;
        }
      }
    } else if (sub_ident->parsed()) {
      if (sub_ident_cr->parsed()) {
        command = "identify credible-region";
        const CredibleRegion cr = credible_region(ident.t, ident.alpha);
        result = json{
            {"t", ident.t},
            {"alpha", ident.alpha},
            {"z_numeric", cr.z_numeric},
            {"z_closed_form", cr.z_closed_form},
            {"region", {cr.region.lo, cr.region.hi}},
            {"mass_numeric", cr.mass_numeric},
            {"discrepancy", cr.z_closed_form - cr.z_numeric},
            {"note",
             "the reference closed form 1-(t(1-t))^alpha carries posterior "
             "mass 1-2*alpha; the numeric root (exponent alpha/2) is "
             "authoritative"}};
      } else if (sub_ident_cont->parsed()) {
        command = "identify containment";
        const ExampleRandomSet set = make_example_set(ident.theta0);
        result = json{{"theta0", ident.theta0},
                      {"k", {ident.k_lo, ident.k_hi}},
                      {"containment",
                       containment(set, IntervalSet{ident.k_lo, ident.k_hi})}};
      } else if (sub_ident_fit->parsed()) {
        command = "identify fit-map";
        const double r = ident.radius;
        if (!(r > 0.0 && r < 0.5)) {
          throw std::invalid_argument("--radius must be in (0, 0.5)");
        }
        std::vector<double> grid;
        for (int k = 0; k < ident.grid_size; ++k) {
          grid.push_back(r + (1.0 - 2.0 * r) * k /
                         std::max(1, ident.grid_size - 1));
        }
        auto sampler = [r](double theta) {
          return IntervalSet{theta - r, theta + r};
        };
        const DecisionDensityFit fit = fit_decision_density(
            grid, sampler, ident.r_degree, ident.constraint, ident.signed_flux);
        double mae = 0.0;
        int held_out = 0;
        for (int i = 0; i < 31; ++i) {
          const double theta = r + (1.0 - 2.0 * r) * (i + 0.41) / 31.0;
          if (theta + r > 1.0) continue;
          mae += std::fabs(predict_from_fit(fit, sampler(theta)) - theta);
          ++held_out;
        }
        result = json{{"family", "midpoint"},
                      {"radius", r},
                      {"coefficients", fit.coefficients},
                      {"grid_size", fit.grid_size},
                      {"constrained", fit.constrained},
                      {"signed_flux", fit.signed_flux},
                      {"residual_norm", fit.residual_norm},
                      {"constraint_residual", fit.constraint_residual},
                      {"held_out_mae", held_out > 0 ? mae / held_out : 0.0}};
      } else {
        command = "identify consistency";
        RngStream stream(global.seed, 6);
        const ConsistencyResult res = decision_consistency_experiment(
            ident.theta0, ident.n_grid, ident.replications,
            ident.selector == "uniform" ? SetSelector::kUniformSelection
                                        : SetSelector::kExampleDecision,
            stream, ident.delta);
        json points = json::array();
        for (const ConsistencyPoint& p : res.points) {
          points.push_back({{"n", p.n}, {"mae", p.mae}});
        }
        result = json{{"theta0", ident.theta0},
                      {"selector", ident.selector},
                      {"points", points},
                      {"final_mae", res.final_mae},
                      {"ambiguous_skips", res.ambiguous_skips}};
      }
    } else if (sub_mc->parsed()) {
      ScenarioConfig config;
      config.scenario = mc.scenario;
      config.sims = mc.sims;
      config.n_values = mc.n_values;
      config.noise_variances = mc.noise_variances;
      config.alphas = mc.alphas;
      config.bandwidth = parse_bandwidth(mc.bandwidth);
      config.kernel = kernel_by_name(mc.kernel);
      config.master_seed = global.seed;
      config.threads = global.threads;
      if (sub_mc_table->parsed()) {
        command = "montecarlo table1";
        const RejectionTable table = run_rejection_table(config);
        const std::string prov = provenance_string(
            command,
            {{"scenario", mc.scenario},
             {"sims", mc.sims},
             {"n_values", mc.n_values},
             {"noise_variances", mc.noise_variances},
             {"alphas", mc.alphas},
             {"bandwidth", mc.bandwidth},
             {"kernel", mc.kernel}},
            global);
        const std::string path = out_path(global, "table1.csv");
        write_text_file(path, rejection_table_csv(table, prov));
        json cells = json::array();
        for (const RejectionCell& cell : table.cells) {
          cells.push_back({{"n", cell.n},
                           {"noise_variance", cell.noise_variance},
                           {"alpha", cell.alpha},
                           {"rejection_rate", cell.rejection_rate},
                           {"failed_fits", cell.failed_fits}});
        }
        result = json{{"csv", path}, {"cells", cells}};
      } else {
        command = "montecarlo paths";
        double variance = mc.variance;
        // Scenario 2's documented default is the 1e6-variance setting.
        if (config.scenario == 2 && !mc.variance_given) variance = 1e6;
        const PathsResult paths_result = run_paths(
            config, variance, mc.paths, mc.n_from, mc.n_to, mc.n_step);
        const std::string prov = provenance_string(
            command,
            {{"scenario", mc.scenario},
             {"variance", variance},
             {"paths", mc.paths},
             {"n_from", mc.n_from},
             {"n_to", mc.n_to},
             {"n_step", mc.n_step},
             {"bandwidth", mc.bandwidth},
             {"kernel", mc.kernel}},
            global);
        const std::string csv_path = out_path(global, "paths.csv");
        write_text_file(csv_path, paths_csv(paths_result, prov));
        SvgChart chart(
            "dp estimate paths, variance " + format_double(variance), prov);
        const std::vector<std::string> palette{"#1f77b4", "#ff7f0e", "#2ca02c",
                                               "#d62728", "#9467bd", "#8c564b"};
        for (std::size_t p = 0; p < paths_result.paths.size(); ++p) {
          std::vector<double> xs, ys;
          for (const PathPoint& point : paths_result.paths[p]) {
            if (!std::isfinite(point.estimate)) continue;
            xs.push_back(point.n);
            ys.push_back(point.estimate);
          }
          if (!xs.empty()) {
            chart.add_polyline(xs, ys, palette[p % palette.size()]);
          }
        }
        const std::string svg_path = out_path(global, "paths.svg");
        chart.write_file(svg_path);
        result = json{{"csv", csv_path},
                      {"svg", svg_path},
                      {"terminal_spread", paths_result.terminal_spread}};
      }
    }

    result["provenance"] = provenance_json(command, global);
    out << result.dump(2) << "\n";
    return 0;
  } catch (const DomainError& e) {
    json error{{"error", {{"code", e.code()}, {"message", e.what()}}}};
    err << error.dump() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    json error{{"error", {{"code", "Internal"}, {"message", e.what()}}}};
    err << error.dump() << "\n";
    return 1;
  }
}

}  // namespace dpident::cli
