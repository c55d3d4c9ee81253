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
#include "dpident/kernels.hpp"

using namespace dpident;

TEST_CASE("kernel evaluations") {
  const KernelSpec uniform = make_kernel(KernelId::kUniform);
  const KernelSpec triangular = make_kernel(KernelId::kTriangular);
  const KernelSpec gaussian = make_kernel(KernelId::kGaussian);
  CHECK(eval_kernel(uniform, 0.5) == 0.5);
  CHECK(eval_kernel(triangular, 0.0) == 1.0);
  CHECK(eval_kernel(triangular, 1.0) == 0.0);
  CHECK(eval_kernel(gaussian, 0.0) ==
        doctest::Approx(0.3989422804014327).epsilon(1e-15));
  // Symmetry and nonnegativity on a grid; zero exactly outside the support.
  for (const KernelSpec& k : {uniform, triangular,
                              make_kernel(KernelId::kEpanechnikov), gaussian}) {
    double sup = 0.0;
    for (int i = -400; i <= 400; ++i) {
      const double u = 0.01 * i;
      const double v = eval_kernel(k, u);
      CHECK(v >= 0.0);
      CHECK(v == eval_kernel(k, -u));
      sup = std::max(sup, v);
      if (k.bounded_support() && std::fabs(u) >= k.u0) CHECK(v == 0.0);
    }
    CHECK(sup == doctest::Approx(k.k_bar).epsilon(1e-3));
  }
}

TEST_CASE("kernel metadata matches classification") {
  CHECK(make_kernel(KernelId::kUniform).k_under ==
        make_kernel(KernelId::kUniform).k_bar);
  CHECK_FALSE(make_kernel(KernelId::kUniform).boundary_continuous);
  // Triangular infimum over a fine interior grid is numerically zero.
  const KernelSpec tri = make_kernel(KernelId::kTriangular);
  double inf = 1e300;
  for (int i = 1; i < 200000; ++i) {
    const double u = -1.0 + 2.0 * i / 200000.0;
    inf = std::min(inf, eval_kernel(tri, u));
  }
  CHECK(inf < 1e-5);
  CHECK(tri.k_under == 0.0);
  CHECK(!make_kernel(KernelId::kGaussian).bounded_support());
  CHECK(kernel_by_name("epanechnikov").id == KernelId::kEpanechnikov);
  CHECK_THROWS_AS(kernel_by_name("box"), std::invalid_argument);
}

TEST_CASE("kh neighborhoods scale with the support radius") {
  const KernelSpec uniform = make_kernel(KernelId::kUniform);
  auto nh = kh_neighborhoods(uniform, 0.0, 0.2);
  CHECK(nh.left_lo == doctest::Approx(-0.2));
  CHECK(nh.left_hi == 0.0);
  CHECK(nh.right_lo == 0.0);
  CHECK(nh.right_hi == doctest::Approx(0.2));

  nh = kh_neighborhoods(make_kernel(KernelId::kGaussian), 0.0, 1.0);
  CHECK(std::isinf(nh.left_lo));
  CHECK(std::isinf(nh.right_hi));

  nh = kh_neighborhoods(make_kernel(KernelId::kTriangular), 1.0, 0.5);
  CHECK(nh.left_lo == doctest::Approx(0.5));
  CHECK(nh.right_hi == doctest::Approx(1.5));
}

TEST_CASE("kernel weights normalize and respect sides") {
  const KernelSpec uniform = make_kernel(KernelId::kUniform);
  const std::vector<double> xs{0.1, 0.1};
  const auto w = kernel_weights(uniform, xs, 0.0, 1.0, Side::kRight);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(0.5));

  const KernelSpec tri = make_kernel(KernelId::kTriangular);
  // Triangular weights at u = 0.25 and 0.5 are 0.75 and 0.5: normalized 3:2.
  const std::vector<double> xs2{0.25, 0.5};
  const auto w2 = kernel_weights(tri, xs2, 0.0, 1.0, Side::kRight);
  CHECK(w2[0] == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(w2[1] == doctest::Approx(0.4).epsilon(1e-12));

  const std::vector<double> left_only{-0.4, -0.2};
  CHECK_THROWS_AS(kernel_weights(uniform, left_only, 0.0, 1.0, Side::kRight),
                  EmptySideError);

  // Weights sum to one within 1e-12 for mixed configurations.
  const std::vector<double> mixed{-0.9, -0.1, 0.05, 0.2, 0.7, 1.4};
  for (const KernelSpec& k :
       {uniform, tri, make_kernel(KernelId::kGaussian)}) {
    for (Side side : {Side::kLeft, Side::kRight}) {
      const auto ws = kernel_weights(k, mixed, 0.0, 0.8, side);
      double total = 0.0;
      for (std::size_t i = 0; i < ws.size(); ++i) {
        total += ws[i];
        const bool on_side = side == Side::kRight ? mixed[i] >= 0.0
                                                  : mixed[i] < 0.0;
        if (!on_side) CHECK(ws[i] == 0.0);
      }
      CHECK(std::fabs(total - 1.0) < 1e-12);
    }
  }
}
