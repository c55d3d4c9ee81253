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
#ifndef DPIDENT_PARALLEL_HPP_
#define DPIDENT_PARALLEL_HPP_

#include <functional>

namespace dpident {

// Runs body(i) for i in [0, n) on `threads` workers (0 = hardware
// concurrency). Each index gets its own substream-derived randomness, so
// results are deterministic regardless of scheduling; exceptions from workers
// are rethrown on the calling thread.
void parallel_for(int n, int threads, const std::function<void(int)>& body);

int resolve_threads(int requested);

}  // namespace dpident

#endif  // DPIDENT_PARALLEL_HPP_
