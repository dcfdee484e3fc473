// Copyright 2026 The dpnn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpnn/budget.h"

#include <cmath>

#include "absl/strings/str_cat.h"

namespace dpnn {

BudgetSplit SplitBudget(double epsilon_per_query, int class_count,
                        MechanismKind mechanism) {
  const double c = static_cast<double>(class_count);
  const double share = mechanism == MechanismKind::kLaplace
                           ? epsilon_per_query / (2.0 * c + 1.0)
                           : epsilon_per_query / std::sqrt(4.0 * c + 1.0);
  return {share, share};
}

double PerQueryBudget(double epsilon_total, std::size_t query_count,
                      MechanismKind mechanism) {
  const double q = static_cast<double>(query_count);
  return mechanism == MechanismKind::kLaplace ? epsilon_total / q
                                              : epsilon_total / std::sqrt(q);
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::Create(
    double epsilon_total, std::size_t queries_allowed, int class_count,
    MechanismKind mechanism, std::optional<std::size_t> training_rows) {
  if (!(epsilon_total > 0.0) || !std::isfinite(epsilon_total)) {
    return absl::InvalidArgumentError(
        absl::StrCat("total epsilon must be positive, got ", epsilon_total));
  }
  if (queries_allowed < 1) {
    return absl::InvalidArgumentError("query count must be at least 1");
  }
  if (class_count < 2) {
    return absl::InvalidArgumentError("class count must be at least 2");
  }
  PrivacyBudget b;
  b.epsilon_total = epsilon_total;
  b.mechanism = mechanism;
  b.class_count = class_count;
  b.queries_allowed = queries_allowed;
  b.epsilon_per_query = PerQueryBudget(epsilon_total, queries_allowed,
                                       mechanism);
  const BudgetSplit split =
      SplitBudget(b.epsilon_per_query, class_count, mechanism);
  b.epsilon_sampling = split.sampling;
  b.epsilon_neuron = split.neuron;
  if (mechanism == MechanismKind::kGaussian && training_rows &&
      *training_rows > 0) {
    b.delta = 1.0 / (10.0 * static_cast<double>(*training_rows));
  }
  return b;
}

absl::StatusOr<PrivacyBudget> PrivacyBudget::ForPerQuery(
    double epsilon_per_query, std::size_t queries_allowed, int class_count,
    MechanismKind mechanism, std::optional<std::size_t> training_rows) {
  const double q = static_cast<double>(queries_allowed);
  const double total = mechanism == MechanismKind::kLaplace
                           ? epsilon_per_query * q
                           : epsilon_per_query * std::sqrt(q);
  auto budget = Create(total, queries_allowed, class_count, mechanism,
                       training_rows);
  if (!budget.ok()) return budget;
  budget->epsilon_per_query = epsilon_per_query;
  const BudgetSplit split =
      SplitBudget(epsilon_per_query, class_count, mechanism);
  budget->epsilon_sampling = split.sampling;
  budget->epsilon_neuron = split.neuron;
  return budget;
}

absl::Status BudgetLedger::Charge() {
  std::lock_guard<std::mutex> lock(mu_);
  if (answered_ >= budget_.queries_allowed) {
    return absl::ResourceExhaustedError(absl::StrCat(
        "privacy budget exhausted: ", answered_, " of ",
        budget_.queries_allowed, " queries answered, remaining epsilon 0 of ",
        budget_.epsilon_total));
  }
  ++answered_;
  return absl::OkStatus();
}

std::size_t BudgetLedger::queries_answered() const {
  std::lock_guard<std::mutex> lock(mu_);
  return answered_;
}

std::size_t BudgetLedger::queries_remaining() const {
  std::lock_guard<std::mutex> lock(mu_);
  return budget_.queries_allowed - answered_;
}

}  // namespace dpnn
