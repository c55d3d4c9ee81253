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
#ifndef DPIDENT_ERRORS_HPP_
#define DPIDENT_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dpident {

// Domain errors carry a stable machine-readable code so the CLI can emit a
// structured JSON error and exit 1. Config/usage problems are reported with
// std::invalid_argument and exit 2 instead.
class DomainError : public std::runtime_error {
 public:
  DomainError(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

class EmptySideError : public DomainError {
 public:
  explicit EmptySideError(const std::string& message)
      : DomainError("EmptySide", message) {}
};

class SingularDesignError : public DomainError {
 public:
  explicit SingularDesignError(const std::string& message)
      : DomainError("SingularDesign", message) {}
};

class WeakFirstStageError : public DomainError {
 public:
  explicit WeakFirstStageError(const std::string& message)
      : DomainError("WeakFirstStage", message) {}
};

class DegeneratePropensityError : public DomainError {
 public:
  explicit DegeneratePropensityError(const std::string& message)
      : DomainError("DegeneratePropensity", message) {}
};

class SupportViolationError : public DomainError {
 public:
  explicit SupportViolationError(const std::string& message)
      : DomainError("SupportViolation", message) {}
};

class AdjacencyViolationError : public DomainError {
 public:
  explicit AdjacencyViolationError(const std::string& message)
      : DomainError("AdjacencyViolation", message) {}
};

class BudgetExceededError : public DomainError {
 public:
  explicit BudgetExceededError(const std::string& message)
      : DomainError("BudgetExceeded", message) {}
};

class InfiniteSensitivityError : public DomainError {
 public:
  explicit InfiniteSensitivityError(const std::string& message)
      : DomainError("InfiniteSensitivity", message) {}
};

class UnclassifiedError : public DomainError {
 public:
  explicit UnclassifiedError(const std::string& message)
      : DomainError("Unclassified", message) {}
};

class NonpositiveDensityError : public DomainError {
 public:
  explicit NonpositiveDensityError(const std::string& message)
      : DomainError("NonpositiveDensity", message) {}
};

class AmbiguousRealizationError : public DomainError {
 public:
  explicit AmbiguousRealizationError(const std::string& message)
      : DomainError("AmbiguousRealization", message) {}
};

class FormInfeasibleError : public DomainError {
 public:
  explicit FormInfeasibleError(const std::string& message)
      : DomainError("FormInfeasible", message) {}
};

class RankDeficientError : public DomainError {
 public:
  explicit RankDeficientError(const std::string& message)
      : DomainError("RankDeficient", message) {}
};

}  // namespace dpident

#endif  // DPIDENT_ERRORS_HPP_
