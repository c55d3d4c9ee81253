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
#ifndef DPIDENT_KERNELS_HPP_
#define DPIDENT_KERNELS_HPP_

#include <span>
#include <string>
#include <vector>

#include "dpident/data_model.hpp"

namespace dpident {

enum class KernelId { kUniform, kTriangular, kEpanechnikov, kGaussian };

// Kernel identity plus the classification metadata the sensitivity formulas
// depend on: support radius u0, sup value k_bar, inf over the open support
// k_under, and whether K is continuous at the support boundary.
struct KernelSpec {
  KernelId id;
  double u0;       // support radius; +inf for unbounded support
  double k_bar;    // sup of K
  double k_under;  // inf of K on (-u0, u0); 0 for continuous kernels
  bool boundary_continuous;

  bool bounded_support() const { return u0 < kInf; }
};

KernelSpec make_kernel(KernelId id);
KernelSpec kernel_by_name(const std::string& name);
std::string kernel_name(KernelId id);

// Standard textbook normalizations: Uniform 1/2 on |u|<1, Triangular 1-|u|,
// Epanechnikov 3/4(1-u^2), standard Gaussian density. All ratio estimators
// downstream are scale-invariant in K, so normalization is cosmetic.
double eval_kernel(const KernelSpec& spec, double u);

struct KhNeighborhoods {
  // Right neighborhood [c, c + u0 h), left neighborhood (c - u0 h, c);
  // half-lines for unbounded-support kernels.
  double left_lo;
  double left_hi;
  double right_lo;
  double right_hi;
};

KhNeighborhoods kh_neighborhoods(const KernelSpec& spec, double c, double h);

enum class Side { kLeft, kRight };

// Normalized kernel weights on one side of the cutoff: nonnegative, summing
// to one, zero for observations on the wrong side. Throws EmptySideError when
// no observation on the requested side has positive kernel value, which is
// the explicit signal that the boundary-regression estimator is undefined.
std::vector<double> kernel_weights(const KernelSpec& spec,
                                   std::span<const double> xs, double c,
                                   double h, Side side);

}  // namespace dpident

#endif  // DPIDENT_KERNELS_HPP_
