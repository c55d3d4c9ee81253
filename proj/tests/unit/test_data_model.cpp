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
#include <sstream>

#include "doctest.h"
#include "dpident/data_model.hpp"
#include "dpident/errors.hpp"
#include "dpident/rng.hpp"

using namespace dpident;

TEST_CASE("projection clamps and is idempotent") {
  const ParamSpace unit{0.0, 1.0};
  CHECK(project(1.7, unit) == 1.0);
  CHECK(project(0.3, unit) == 0.3);
  CHECK(project(-5.0, unit) == 0.0);
  RngStream stream(3, 0);
  for (int i = 0; i < 200; ++i) {
    const double v = stream.uniform(-10.0, 10.0);
    CHECK(project(project(v, unit), unit) == project(v, unit));
  }
  CHECK_THROWS_AS(make_param_space(1.0, 1.0), std::invalid_argument);
}

TEST_CASE("sequence values and limits") {
  CHECK(seq_value(make_sequence(1.0, -0.5, 0.0), 100.0) ==
        doctest::Approx(0.1).epsilon(1e-14));
  CHECK(seq_limit(make_sequence(2.0, 0.0, 0.0)).cls == LimitClass::kFinite);
  CHECK(seq_limit(make_sequence(2.0, 0.0, 0.0)).value == 2.0);

  // log N / N -> 0: the classifier must agree with direct evaluation along
  // N = 1e3 .. 1e9.
  const SequenceSpec log_over_n = make_sequence(1.0, -1.0, 1.0);
  CHECK(seq_limit(log_over_n).cls == LimitClass::kZero);
  double prev = seq_value(log_over_n, 1e3);
  for (double n : {1e4, 1e5, 1e6, 1e7, 1e8, 1e9}) {
    const double cur = seq_value(log_over_n, n);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(prev < 1e-7);

  // Classification agrees with the numerically evaluated trend at N = 1e12.
  for (const SequenceSpec& spec :
       {make_sequence(3.0, 0.3, 0.0), make_sequence(0.2, -0.2, 2.0),
        make_sequence(5.0, 0.0, -1.0), make_sequence(4.0, 0.0, 0.0)}) {
    const double v12 = seq_value(spec, 1e12);
    const double v8 = seq_value(spec, 1e8);
    switch (seq_limit(spec).cls) {
      case LimitClass::kZero: CHECK(v12 < v8); break;
      case LimitClass::kInfinite: CHECK(v12 > v8); break;
      case LimitClass::kFinite:
        CHECK(v12 == doctest::Approx(seq_limit(spec).value));
        break;
    }
  }
  CHECK_THROWS_AS(seq_value(log_over_n, 1.0), std::invalid_argument);

  // Monotone in N once the power signs agree, beyond a modest threshold.
  for (const SequenceSpec& spec :
       {make_sequence(2.0, 0.5, 1.0), make_sequence(0.3, 0.5, 0.0),
        make_sequence(1.0, -0.5, -1.0), make_sequence(1.0, 0.0, 2.0)}) {
    const bool rising = seq_limit(spec).cls == LimitClass::kInfinite;
    double prev = seq_value(spec, 100.0);
    for (double n : {1e3, 1e4, 1e5, 1e6}) {
      const double cur = seq_value(spec, n);
      if (rising) CHECK(cur > prev);
      else CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("hoeffding regularity rate") {
  CHECK(regularity_rate(1, 1, 1, 1) ==
        doctest::Approx(2.0 * std::exp(-2.0)).epsilon(1e-14));
  CHECK(regularity_rate(10, 0.5, 2, 1) ==
        doctest::Approx(4.0 * std::exp(-5.0)).epsilon(1e-14));
  // Strictly decreasing in N and kappa, and vanishing with N.
  CHECK(regularity_rate(20, 0.5, 2, 1) < regularity_rate(10, 0.5, 2, 1));
  CHECK(regularity_rate(10, 0.6, 2, 1) < regularity_rate(10, 0.5, 2, 1));
  CHECK(regularity_rate(1e6, 0.1, 1, 1) < 1e-100);
}

TEST_CASE("rng streams reproduce bitwise and split") {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) {
    CHECK(a.next_u64() == b.next_u64());
  }
  RngStream c(42, 8);
  bool differs = false;
  RngStream a2(42, 7);
  for (int i = 0; i < 16; ++i) differs = differs || a2.next_u64() != c.next_u64();
  CHECK(differs);

  // Same draws through the double-level samplers too.
  RngStream d(1, 2), e(1, 2);
  for (int i = 0; i < 100; ++i) {
    CHECK(d.laplace(0.0, 1.0) == e.laplace(0.0, 1.0));
    CHECK(d.normal(0.0, 1.0) == e.normal(0.0, 1.0));
  }
}

TEST_CASE("rng moments") {
  RngStream stream(99, 0);
  const int n = 100000;
  double su = 0.0, su2 = 0.0, sl = 0.0, sl2 = 0.0, sn = 0.0, sn2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double u = stream.uniform01();
    const double l = stream.laplace(0.0, 0.5);
    const double z = stream.normal(1.0, 2.0);
    su += u; su2 += u * u;
    sl += l; sl2 += l * l;
    sn += z; sn2 += z * z;
  }
  CHECK(su / n == doctest::Approx(0.5).epsilon(0.01));
  CHECK(su2 / n - (su / n) * (su / n) ==
        doctest::Approx(1.0 / 12.0).epsilon(0.03));
  CHECK(sl / n == doctest::Approx(0.0).epsilon(0.02));
  // Var(Lap(0, b)) = 2 b^2.
  CHECK(sl2 / n == doctest::Approx(0.5).epsilon(0.05));
  CHECK(sn / n == doctest::Approx(1.0).epsilon(0.02));
  CHECK(sn2 / n - (sn / n) * (sn / n) == doctest::Approx(4.0).epsilon(0.05));
}

TEST_CASE("poisson sampler matches pmf and moments") {
  RngStream stream(5, 5);
  // Small mean: chi-square style check of the leading pmf cells.
  const double mu = 3.0;
  const int n = 200000;
  std::vector<int> counts(12, 0);
  for (int i = 0; i < n; ++i) {
    const auto k = stream.poisson(mu);
    if (k < counts.size()) ++counts[static_cast<int>(k)];
  }
  double pmf = std::exp(-mu);
  for (int k = 0; k < 10; ++k) {
    const double expected = n * pmf;
    CHECK(std::fabs(counts[k] - expected) < 5.0 * std::sqrt(expected) + 5.0);
    pmf *= mu / (k + 1);
  }
  // Large mean goes through the rejection sampler.
  double s = 0.0, s2 = 0.0;
  const double big = 5000.0;
  for (int i = 0; i < 20000; ++i) {
    const double k = static_cast<double>(stream.poisson(big));
    s += k;
    s2 += k * k;
  }
  const double m = s / 20000.0;
  CHECK(m == doctest::Approx(big).epsilon(0.01));
  CHECK(s2 / 20000.0 - m * m == doctest::Approx(big).epsilon(0.05));
}

TEST_CASE("dataset invariants and csv loading") {
  CHECK_THROWS_AS(Dataset::weighted({0.1}, {-0.5}), std::invalid_argument);
  CHECK_THROWS_AS(
      Dataset::univariate({0.5, 1.4}, Interval{0.0, 1.0}),
      SupportViolationError);
  CHECK_THROWS_AS(Dataset::rdd({1.0}, {0.0}, {0.3}), std::invalid_argument);

  std::istringstream csv("y,x,w\n1.5,0.2,1\n-0.5,-0.3,0\n");
  const Dataset d = load_dataset_csv(csv);
  CHECK(d.shape() == DatasetShape::kRdd);
  REQUIRE(d.size() == 2);
  CHECK(d.y()[0] == 1.5);
  CHECK(d.x()[1] == -0.3);
  CHECK(d.w()[1] == 0.0);

  std::istringstream uni("x\n0.25\n0.75\n");
  CHECK(load_dataset_csv(uni).shape() == DatasetShape::kUnivariate);
  std::istringstream bad("x,z\n1,2\n");
  CHECK_THROWS_AS(load_dataset_csv(bad), std::invalid_argument);
}
