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
#ifndef DPIDENT_RNG_HPP_
#define DPIDENT_RNG_HPP_

#include <cstdint>

namespace dpident {

// Seeded, stream-splittable PRNG (xoshiro256++ state initialized by
// splitmix64 over the (seed, stream_id) pair). Identical (seed, stream_id)
// reproduce bitwise-identical draw sequences; distinct stream_ids give
// statistically independent streams, so parallel Monte Carlo replications
// keyed by stream_id are deterministic regardless of scheduling.
//
// All samplers are implemented in-house (inverse CDF where a closed form
// exists) rather than via <random> distributions, whose outputs are not
// pinned by the standard.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Derives an independent child stream; mixes the child id into this
  // stream's identity so nested fan-out stays collision-free.
  RngStream substream(std::uint64_t child_id) const;

  std::uint64_t next_u64();

  // Uniform on (0,1): never returns 0 or 1, so inverse-CDF transforms
  // stay finite.
  double uniform01();
  double uniform(double lo, double hi);
  bool bernoulli(double p);

  // Inverse-CDF Laplace draw; a deterministic function of the stream state.
  double laplace(double location, double scale);
  double normal(double mean, double sd);
  // Knuth multiplication for small means, Hormann's PTRS rejection above.
  std::uint64_t poisson(double mean);

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t state_[4];
};

}  // namespace dpident

#endif  // DPIDENT_RNG_HPP_
