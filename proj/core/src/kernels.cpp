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
#include "dpident/kernels.hpp"

#include <cmath>
#include <stdexcept>

#include "dpident/errors.hpp"

namespace dpident {

namespace {
constexpr double kInvSqrt2Pi = 0.3989422804014327;
}

KernelSpec make_kernel(KernelId id) {
  switch (id) {
    case KernelId::kUniform:
      return KernelSpec{id, 1.0, 0.5, 0.5, false};
    case KernelId::kTriangular:
      return KernelSpec{id, 1.0, 1.0, 0.0, true};
    case KernelId::kEpanechnikov:
      return KernelSpec{id, 1.0, 0.75, 0.0, true};
    case KernelId::kGaussian:
      return KernelSpec{id, kInf, kInvSqrt2Pi, 0.0, true};
  }
  throw std::invalid_argument("unknown kernel id");
}

KernelSpec kernel_by_name(const std::string& name) {
  if (name == "uniform") return make_kernel(KernelId::kUniform);
  if (name == "triangular") return make_kernel(KernelId::kTriangular);
  if (name == "epanechnikov") return make_kernel(KernelId::kEpanechnikov);
  if (name == "gaussian") return make_kernel(KernelId::kGaussian);
  throw std::invalid_argument("unknown kernel '" + name + "'");
}

std::string kernel_name(KernelId id) {
  switch (id) {
    case KernelId::kUniform: return "uniform";
    case KernelId::kTriangular: return "triangular";
    case KernelId::kEpanechnikov: return "epanechnikov";
    case KernelId::kGaussian: return "gaussian";
  }
  return "unknown";
}

double eval_kernel(const KernelSpec& spec, double u) {
  const double a = std::fabs(u);
  switch (spec.id) {
    case KernelId::kUniform:
      return a < 1.0 ? 0.5 : 0.0;
    case KernelId::kTriangular:
      return a < 1.0 ? 1.0 - a : 0.0;
    case KernelId::kEpanechnikov:
      return a < 1.0 ? 0.75 * (1.0 - u * u) : 0.0;
    case KernelId::kGaussian:
      return kInvSqrt2Pi * std::exp(-0.5 * u * u);
  }
  return 0.0;
}

KhNeighborhoods kh_neighborhoods(const KernelSpec& spec, double c, double h) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("kh_neighborhoods requires h > 0");
  }
  if (!spec.bounded_support()) {
    return KhNeighborhoods{-kInf, c, c, kInf};
  }
  const double delta = spec.u0 * h;
  return KhNeighborhoods{c - delta, c, c, c + delta};
}

std::vector<double> kernel_weights(const KernelSpec& spec,
                                   std::span<const double> xs, double c,
                                   double h, Side side) {
  if (!(h > 0.0)) {
    throw std::invalid_argument("kernel_weights requires h > 0");
  }
  std::vector<double> w(xs.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const bool on_side =
        side == Side::kRight ? xs[i] >= c : xs[i] < c;
    if (!on_side) continue;
    w[i] = eval_kernel(spec, (xs[i] - c) / h);
    total += w[i];
  }
  if (!(total > 0.0)) {
    throw EmptySideError(side == Side::kRight
                             ? "no observation with positive weight right of c"
                             : "no observation with positive weight left of c");
  }
  for (double& wi : w) wi /= total;
  return w;
}

}  // namespace dpident
