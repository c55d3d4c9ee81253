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
#ifndef DPIDENT_CLI_HPP_
#define DPIDENT_CLI_HPP_

#include <iostream>
#include <string>
#include <vector>

namespace dpident::cli {

// Runs one CLI invocation. Exit codes: 0 success, 1 domain error (structured
// JSON on the error stream), 2 usage or configuration error.
int dispatch(const std::vector<std::string>& args,
             std::ostream& out = std::cout, std::ostream& err = std::cerr);

}  // namespace dpident::cli

#endif  // DPIDENT_CLI_HPP_
