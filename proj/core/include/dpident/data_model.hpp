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
#ifndef DPIDENT_DATA_MODEL_HPP_
#define DPIDENT_DATA_MODEL_HPP_

#include <cstddef>
#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace dpident {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Convex compact parameter space [lo, hi]; estimators that leave it are
// projected back onto it.
struct ParamSpace {
  double lo = 0.0;
  double hi = 1.0;

  double diameter() const { return hi - lo; }
};

ParamSpace make_param_space(double lo, double hi);

double project(double value, const ParamSpace& space);

// Closed interval, possibly unbounded on either end; used for declared
// variable supports.
struct Interval {
  double lo = -kInf;
  double hi = kInf;

  bool bounded() const { return lo > -kInf && hi < kInf; }
  double width() const { return hi - lo; }
  bool contains(double v) const { return v >= lo && v <= hi; }
};

struct PrivacyParams {
  double epsilon = 0.0;
  double delta = 0.0;
};

PrivacyParams make_privacy_params(double epsilon, double delta);

// Positive sequence coeff * N^n_power * (log N)^log_power, N >= 2. This
// family covers every asymptotic regime distinguished downstream while
// keeping N -> infinity limits decidable from the exponents alone.
struct SequenceSpec {
  double coeff = 1.0;
  double n_power = 0.0;
  double log_power = 0.0;
};

SequenceSpec make_sequence(double coeff, double n_power, double log_power);

double seq_value(const SequenceSpec& spec, double n);

enum class LimitClass { kZero, kFinite, kInfinite };

struct SeqLimit {
  LimitClass cls;
  double value;  // the finite limit when cls == kFinite, else 0 or +inf
};

SeqLimit seq_limit(const SequenceSpec& spec);

SequenceSpec seq_multiply(const SequenceSpec& a, const SequenceSpec& b);
// The sequence N * a(N).
SequenceSpec seq_scale_by_n(const SequenceSpec& a);

// Hoeffding consistency rate 2 d exp(-2 N kappa^2 / diam^2) for the
// noise-free estimator.
double regularity_rate(double n, double kappa, int d, double diam);

enum class DatasetShape { kUnivariate, kWeighted, kRdd };

// Column store for the three observation shapes. Optional columns are empty
// when absent; invariants are enforced by the factory functions.
class Dataset {
 public:
  static Dataset univariate(std::vector<double> x,
                            std::optional<Interval> support = std::nullopt);
  static Dataset weighted(std::vector<double> x, std::vector<double> w,
                          std::optional<Interval> x_support = std::nullopt,
                          std::optional<Interval> w_support = std::nullopt);
  static Dataset rdd(std::vector<double> y, std::vector<double> x,
                     std::vector<double> w = {}, std::vector<double> d = {},
                     std::optional<Interval> y_support = std::nullopt);

  DatasetShape shape() const { return shape_; }
  std::size_t size() const { return x_.size(); }

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }
  const std::vector<double>& w() const { return w_; }
  const std::vector<double>& d() const { return d_; }

  bool has_w() const { return !w_.empty(); }
  bool has_d() const { return !d_.empty(); }

  const std::optional<Interval>& x_support() const { return x_support_; }
  const std::optional<Interval>& y_support() const { return y_support_; }
  const std::optional<Interval>& w_support() const { return w_support_; }

  // Replaces record i, preserving shape; used by the sensitivity oracle.
  void set_record(std::size_t i, double x, double y, double w, double d);

 private:
  Dataset() = default;

  DatasetShape shape_ = DatasetShape::kUnivariate;
  std::vector<double> x_, y_, w_, d_;
  std::optional<Interval> x_support_, y_support_, w_support_;
};

// Loads a dataset from CSV with a header row naming columns among
// {x, y, w, d}; the shape is inferred from the columns present.
Dataset load_dataset_csv(std::istream& in);
Dataset load_dataset_csv_file(const std::string& path);

}  // namespace dpident

#endif  // DPIDENT_DATA_MODEL_HPP_
