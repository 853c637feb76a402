// Copyright 2026 The hqoc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Objective over the free pulse coordinates, shared by the local optimizers.

#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "hqoc/optimize.hpp"

namespace hqoc::detail {

class FreeObjective {
 public:
  FreeObjective(const ControlProblem& problem, const BackendSpec& backend);

  /// Free coordinates of a full amplitude vector.
  std::vector<double> pack(std::span<const double> amplitudes) const;
  /// Full amplitude vector, frozen slots zero, clamped when the template is.
  std::vector<double> unpack(std::span<const double> x) const;

  /// Cached evaluation at the free coordinates x.
  const Evaluation& operator()(std::span<const double> x);

  long long evaluations() const { return evaluations_; }

  /// History with one record per entry of `best_per_iteration`.
  OptimizationRun make_run(const std::string& optimizer,
                           const std::vector<std::vector<double>>& best_per_iteration,
                           const std::vector<long long>& evaluations_per_iteration);

 private:
  const ControlProblem& problem_;
  const BackendSpec& backend_;
  std::vector<int> free_;
  std::map<std::vector<double>, Evaluation> cache_;
  long long evaluations_ = 0;
};

}  // namespace hqoc::detail
