// Copyright 2026 The Pufferkit Authors
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

#pragma once

#include <limits>
#include <stdexcept>
#include <string>

namespace pufferkit {

// Thrown when caller-supplied input violates a documented precondition
// (bad probabilities, empty candidate sets, malformed files, ...).
class validation_error : public std::runtime_error {
 public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a computation cannot be completed at working precision
// (singular linear systems, simplex iteration blowup, ...).
class numeric_error : public std::runtime_error {
 public:
  explicit numeric_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when persisted state fails a consistency check on load or merge,
// e.g. mixing release records from unrelated mechanism families.
class integrity_error : public std::runtime_error {
 public:
  explicit integrity_error(const std::string& what) : std::runtime_error(what) {}
};

// Thrown when a requested release does not fit in the remaining budget.
class budget_error : public std::runtime_error {
 public:
  explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace pufferkit
