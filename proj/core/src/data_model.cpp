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
#include "dpident/data_model.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>
#include <stdexcept>

#include "dpident/errors.hpp"

namespace dpident {

ParamSpace make_param_space(double lo, double hi) {
  if (!(lo < hi)) {
    throw std::invalid_argument("ParamSpace requires lo < hi");
  }
  return ParamSpace{lo, hi};
}

double project(double value, const ParamSpace& space) {
  return std::min(space.hi, std::max(space.lo, value));
}

PrivacyParams make_privacy_params(double epsilon, double delta) {
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("PrivacyParams requires epsilon >= 0");
  }
  if (!(delta >= 0.0 && delta < 1.0)) {
    throw std::invalid_argument("PrivacyParams requires delta in [0,1)");
  }
  return PrivacyParams{epsilon, delta};
}

SequenceSpec make_sequence(double coeff, double n_power, double log_power) {
  if (!(coeff > 0.0)) {
    throw std::invalid_argument("SequenceSpec requires coeff > 0");
  }
  return SequenceSpec{coeff, n_power, log_power};
}

double seq_value(const SequenceSpec& spec, double n) {
  if (!(n >= 2.0)) {
    throw std::invalid_argument("seq_value requires N >= 2");
  }
  return spec.coeff * std::pow(n, spec.n_power) *
         std::pow(std::log(n), spec.log_power);
}

SeqLimit seq_limit(const SequenceSpec& spec) {
  if (spec.n_power > 0.0) return {LimitClass::kInfinite, kInf};
  if (spec.n_power < 0.0) return {LimitClass::kZero, 0.0};
  if (spec.log_power > 0.0) return {LimitClass::kInfinite, kInf};
  if (spec.log_power < 0.0) return {LimitClass::kZero, 0.0};
  return {LimitClass::kFinite, spec.coeff};
}

SequenceSpec seq_multiply(const SequenceSpec& a, const SequenceSpec& b) {
  return SequenceSpec{a.coeff * b.coeff, a.n_power + b.n_power,
                      a.log_power + b.log_power};
}

SequenceSpec seq_scale_by_n(const SequenceSpec& a) {
  return SequenceSpec{a.coeff, a.n_power + 1.0, a.log_power};
}

double regularity_rate(double n, double kappa, int d, double diam) {
  if (!(n >= 1.0) || !(kappa > 0.0) || !(diam > 0.0) || d < 1) {
    throw std::invalid_argument("regularity_rate: invalid arguments");
  }
  return 2.0 * d * std::exp(-2.0 * n * kappa * kappa / (diam * diam));
}

namespace {

void check_support(const std::vector<double>& v,
                   const std::optional<Interval>& support, const char* name) {
  if (!support) return;
  for (double x : v) {
    if (!support->contains(x)) {
      throw SupportViolationError(std::string(name) +
                                  " value outside declared support");
    }
  }
}

}  // namespace

Dataset Dataset::univariate(std::vector<double> x,
                            std::optional<Interval> support) {
  check_support(x, support, "x");
  Dataset d;
  d.shape_ = DatasetShape::kUnivariate;
  d.x_ = std::move(x);
  d.x_support_ = support;
  return d;
}

Dataset Dataset::weighted(std::vector<double> x, std::vector<double> w,
                          std::optional<Interval> x_support,
                          std::optional<Interval> w_support) {
  if (x.size() != w.size()) {
    throw std::invalid_argument("weighted dataset: |x| != |w|");
  }
  for (double wi : w) {
    if (!(wi >= 0.0)) {
      throw std::invalid_argument("weighted dataset requires w >= 0");
    }
  }
  check_support(x, x_support, "x");
  check_support(w, w_support, "w");
  Dataset d;
  d.shape_ = DatasetShape::kWeighted;
  d.x_ = std::move(x);
  d.w_ = std::move(w);
  d.x_support_ = x_support;
  d.w_support_ = w_support;
  return d;
}

Dataset Dataset::rdd(std::vector<double> y, std::vector<double> x,
                     std::vector<double> w, std::vector<double> d,
                     std::optional<Interval> y_support) {
  if (y.size() != x.size()) {
    throw std::invalid_argument("rdd dataset: |y| != |x|");
  }
  if (!w.empty() && w.size() != x.size()) {
    throw std::invalid_argument("rdd dataset: |w| != |x|");
  }
  if (!d.empty() && d.size() != x.size()) {
    throw std::invalid_argument("rdd dataset: |d| != |x|");
  }
  for (const auto* col : {&w, &d}) {
    for (double v : *col) {
      if (v != 0.0 && v != 1.0) {
        throw std::invalid_argument("rdd dataset: w and d must be binary");
      }
    }
  }
  check_support(y, y_support, "y");
  Dataset out;
  out.shape_ = DatasetShape::kRdd;
  out.y_ = std::move(y);
  out.x_ = std::move(x);
  out.w_ = std::move(w);
  out.d_ = std::move(d);
  out.y_support_ = y_support;
  return out;
}

void Dataset::set_record(std::size_t i, double x, double y, double w,
                         double d) {
  x_.at(i) = x;
  if (!y_.empty()) y_.at(i) = y;
  if (!w_.empty()) w_.at(i) = w;
  if (!d_.empty()) d_.at(i) = d;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

Dataset load_dataset_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) {
    throw std::invalid_argument("CSV: empty input");
  }
  const std::vector<std::string> header = split_csv_line(line);
  int ix = -1, iy = -1, iw = -1, id = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == "x") ix = static_cast<int>(i);
    else if (header[i] == "y") iy = static_cast<int>(i);
    else if (header[i] == "w") iw = static_cast<int>(i);
    else if (header[i] == "d") id = static_cast<int>(i);
    else throw std::invalid_argument("CSV: unknown column '" + header[i] + "'");
  }
  if (ix < 0) throw std::invalid_argument("CSV: missing required column 'x'");

  std::vector<double> x, y, w, d;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> f = split_csv_line(line);
    if (f.size() != header.size()) {
      throw std::invalid_argument("CSV: wrong field count at line " +
                                  std::to_string(lineno));
    }
    auto field = [&](int idx) {
      try {
        return std::stod(f[static_cast<std::size_t>(idx)]);
      } catch (const std::exception&) {
        throw std::invalid_argument("CSV: bad number at line " +
                                    std::to_string(lineno));
      }
    };
    x.push_back(field(ix));
    if (iy >= 0) y.push_back(field(iy));
    if (iw >= 0) w.push_back(field(iw));
    if (id >= 0) d.push_back(field(id));
  }

  if (iy >= 0) return Dataset::rdd(std::move(y), std::move(x), std::move(w),
                                   std::move(d));
  if (iw >= 0) return Dataset::weighted(std::move(x), std::move(w));
  return Dataset::univariate(std::move(x));
}

Dataset load_dataset_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) {
    throw std::invalid_argument("cannot open dataset file: " + path);
  }
  return load_dataset_csv(f);
}

}  // namespace dpident
